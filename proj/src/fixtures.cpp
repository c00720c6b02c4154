#include "kronload/fixtures.hpp"

#include <charconv>

#include "kronload/error.hpp"

namespace kronload::fixtures {

std::string_view raw(std::string_view stem) {
  const auto& files = detail::embedded_files();
  const auto it = files.find(std::string(stem));
  if (it == files.end()) throw DomainError("no embedded fixture named '" + std::string(stem) + "'");
  return it->second;
}

std::vector<std::vector<std::string>> rows(std::string_view stem) {
  std::string_view text = raw(stem);
  std::vector<std::vector<std::string>> out;
  bool header = true;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (header) {
      header = false;
      continue;
    }
    std::vector<std::string> cells;
    std::string cell;
    bool quoted = false;
    for (char c : line) {
      if (c == '"') {
        quoted = !quoted;
      } else if (c == ',' && !quoted) {
        cells.push_back(std::move(cell));
        cell.clear();
      } else {
        cell += c;
      }
    }
    cells.push_back(std::move(cell));
    out.push_back(std::move(cells));
  }
  return out;
}

namespace {

double number(const std::string& s) {
  double x = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw DomainError("bad fixture number '" + s + "'");
  return x;
}

int integer(const std::string& s) { return static_cast<int>(number(s)); }

void require_width(const std::vector<std::string>& row, std::size_t width, std::string_view stem) {
  if (row.size() != width) throw DomainError("fixture " + std::string(stem) + " has a row of the wrong width");
}

std::vector<ThresholdRow> triple_table(std::string_view stem) {
  std::vector<ThresholdRow> out;
  for (const auto& row : rows(stem)) {
    require_width(row, 5, stem);
    const int n = integer(row[0]);
    out.push_back({n, row[1], number(row[1]),
                   Triple(parse_partition(row[2], n), parse_partition(row[3], n), parse_partition(row[4], n))});
  }
  return out;
}

}  // namespace

std::vector<LoadingRow> appendix_a() {
  std::vector<LoadingRow> out;
  for (const auto& row : rows("appendix_a")) {
    require_width(row, 4, "appendix_a");
    const int n = integer(row[0]);
    out.push_back({n, parse_partition(row[1], n), row[2], row[3], number(row[2]), number(row[3])});
  }
  return out;
}

std::vector<ThresholdRow> table1() { return triple_table("table1"); }
std::vector<ThresholdRow> table2() { return triple_table("table2"); }
std::vector<ThresholdRow> table3() { return triple_table("table3"); }

std::vector<ThresholdRow> table4() {
  std::vector<ThresholdRow> out;
  for (const auto& row : rows("table4")) {
    require_width(row, 3, "table4");
    const int n = integer(row[0]);
    const Partition lambda = parse_partition(row[2], n);
    out.push_back({n, row[1], number(row[1]), Triple(lambda, lambda, lambda)});
  }
  return out;
}

std::map<std::string, std::vector<double>> section2_example() {
  std::map<std::string, std::vector<double>> out;
  for (const auto& row : rows("section2_example")) {
    require_width(row, 2, "section2_example");
    std::vector<double> values;
    std::string_view list = row[1];
    while (true) {
      const auto comma = list.find(',');
      values.push_back(number(std::string(list.substr(0, comma))));
      if (comma == std::string_view::npos) break;
      list.remove_prefix(comma + 1);
    }
    out[row[0]] = std::move(values);
  }
  return out;
}

Example42 example_4_2() {
  std::map<std::string, std::string> kv;
  for (const auto& row : rows("example_4_2")) {
    require_width(row, 2, "example_4_2");
    kv[row[0]] = row[1];
  }
  auto get = [&](const std::string& key) -> const std::string& {
    const auto it = kv.find(key);
    if (it == kv.end()) throw DomainError("fixture example_4_2 lacks key " + key);
    return it->second;
  };
  auto count = [&](const std::string& key) {
    const std::string& s = get(key);
    std::uint64_t v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw DomainError("bad fixture count '" + s + "'");
    return v;
  };
  return {Triple(parse_partition(get("n18_lambda"), 18), parse_partition(get("n18_mu"), 18),
                 parse_partition(get("n18_nu"), 18)),
          number(get("n18_b_triple")),
          number(get("n18_b_star")),
          count("n20_total_triples"),
          count("n20_b_below_count"),
          count("n20_r_below_count"),
          number(get("n20_b_below_percent")),
          number(get("n20_r_below_percent")),
          number(get("n20_b_star")),
          number(get("n20_r_star"))};
}

std::vector<MeanRow> section3_means() {
  std::vector<MeanRow> out;
  for (const auto& row : rows("section3_means")) {
    require_width(row, 3, "section3_means");
    out.push_back({integer(row[0]), number(row[1]), number(row[2])});
  }
  return out;
}

}  // namespace kronload::fixtures
