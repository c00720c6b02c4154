#include "kronload/cache.hpp"

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>
#include <system_error>

#include "json.hpp"

#include "kronload/error.hpp"

namespace kronload {

namespace fs = std::filesystem;

fs::path default_cache_dir() {
  if (const char* env = std::getenv("KRONLOAD_CACHE"); env && *env) return env;
  if (const char* xdg = std::getenv("XDG_CACHE_HOME"); xdg && *xdg) return fs::path(xdg) / "kronload";
  if (const char* home = std::getenv("HOME"); home && *home) return fs::path(home) / ".cache" / "kronload";
  return fs::temp_directory_path() / "kronload";
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {

constexpr std::string_view checksum_prefix = "# checksum fnv1a64=";

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ExitCode::usage, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string format_double(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view s) {
  double x = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw DomainError("malformed number '" + std::string(s) + "' in cache payload");
  }
  return x;
}

// Splits one CSV line; double quotes protect commas.
std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i <= line.size()) {
    if (i < line.size() && line[i] == '"') {
      const auto close = line.find('"', i + 1);
      if (close == std::string_view::npos) throw DomainError("unterminated quote in CSV line");
      out.push_back(line.substr(i + 1, close - i - 1));
      i = close + 1;
      if (i < line.size() && line[i] != ',') throw DomainError("text after closing quote in CSV line");
      ++i;
    } else {
      const auto comma = std::min(line.find(',', i), line.size());
      out.push_back(line.substr(i, comma - i));
      i = comma + 1;
    }
  }
  return out;
}

std::vector<std::string_view> lines_of(std::string_view text) {
  std::vector<std::string_view> out;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    out.push_back(line);
    if (nl == std::string_view::npos) break;
    text.remove_prefix(nl + 1);
  }
  return out;
}

}  // namespace

fs::path Cache::path_for(std::string_view kind, int n, std::string_view ext, std::string_view tag) const {
  std::string name = "n=" + std::to_string(n) + ".v" + std::to_string(format_version);
  if (!tag.empty()) name += "." + std::string(tag);
  name += "." + std::string(ext);
  return root_ / std::string(kind) / name;
}

Cache::Lookup Cache::read(std::string_view kind, int n, std::string_view ext, std::string_view tag) const {
  const fs::path path = path_for(kind, n, ext, tag);
  std::error_code ec;
  if (!fs::exists(path, ec)) return {};
  const std::string text = read_file(path);
  const auto nl = text.find('\n');
  const std::string_view first = std::string_view(text).substr(0, nl);
  if (nl == std::string::npos || !first.starts_with(checksum_prefix)) {
    return {Status::corrupt, {}, path.string() + ": missing checksum header"};
  }
  std::string payload = text.substr(nl + 1);
  const std::string expected(first.substr(checksum_prefix.size()));
  const std::string actual = hex64(fnv1a64(payload));
  if (expected != actual) {
    return {Status::corrupt, {}, path.string() + ": checksum " + actual + " does not match recorded " + expected};
  }
  return {Status::hit, std::move(payload), {}};
}

void Cache::write(std::string_view kind, int n, std::string_view ext, std::string_view payload,
                  std::string_view tag) const {
  const fs::path path = path_for(kind, n, ext, tag);
  fs::create_directories(path.parent_path());
  std::random_device rd;
  const fs::path tmp = path.parent_path() / (path.filename().string() + ".tmp" + std::to_string(rd()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ExitCode::usage, "cannot write " + tmp.string());
    out << checksum_prefix << hex64(fnv1a64(payload)) << '\n' << payload;
    if (!out.flush()) throw Error(ExitCode::usage, "cannot write " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::string serialize_table(const CharacterTable& table) {
  std::string out = "# chartable n=" + std::to_string(table.n()) + " order=lex-desc version=1\n";
  const std::size_t p = table.size();
  out.reserve(out.size() + p * p * 6);
  char buf[24];
  for (std::size_t r = 0; r < p; ++r) {
    for (std::size_t c = 0; c < p; ++c) {
      if (c) out += ',';
      if (table.fits_int64()) {
        const auto res = std::to_chars(buf, buf + sizeof buf, table.value64(r, c));
        out.append(buf, res.ptr);
      } else {
        out += table.value(r, c).get_str();
      }
    }
    out += '\n';
  }
  return out;
}

CharacterTable parse_table(std::string_view payload, int n) {
  const auto lines = lines_of(payload);
  const std::string header = "# chartable n=" + std::to_string(n) + " order=lex-desc version=1";
  if (lines.empty() || lines.front() != header) throw DomainError("character table header does not match n=" + std::to_string(n));
  auto order = shared_partitions(n);
  const std::size_t p = order->size();
  std::vector<std::int64_t> small;
  std::vector<BigInt> big;  // used once some entry leaves the int64 range
  small.reserve(p * p);
  std::size_t rows = 0;
  for (std::size_t l = 1; l < lines.size(); ++l) {
    if (lines[l].empty()) continue;
    const auto cells = split_csv(lines[l]);
    if (cells.size() != p) throw DomainError("character table row " + std::to_string(rows) + " has wrong width");
    for (auto cell : cells) {
      std::int64_t v = 0;
      const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (big.empty() && res.ec == std::errc() && res.ptr == cell.data() + cell.size()) {
        small.push_back(v);
        continue;
      }
      if (big.empty()) {
        for (auto s : small) big.push_back(to_big(s));
      }
      BigInt b;
      if (cell.empty() || b.set_str(std::string(cell), 10) != 0) {
        throw DomainError("malformed character value '" + std::string(cell) + "'");
      }
      big.push_back(std::move(b));
    }
    ++rows;
  }
  if (rows != p) throw DomainError("character table has " + std::to_string(rows) + " rows, expected " + std::to_string(p));
  if (big.empty()) return CharacterTable(std::move(order), std::move(small));
  return CharacterTable(std::move(order), std::move(big));
}

std::string mode_tag(const IterationMode& mode) {
  if (mode.is_default()) return {};
  if (mode.kind == IterationMode::Kind::fixed) return "fixed" + std::to_string(mode.steps);
  return "tol" + format_double(mode.tol) + "-max" + std::to_string(mode.max_iters);
}

std::string serialize_loadings(const LoadingTable& t, const IterationMode& mode) {
  std::string out = "# loadings n=" + std::to_string(t.n) + " version=1\n";
  out += "# mode=" + (mode.is_default() ? std::string("default") : mode_tag(mode)) + "\n";
  out += "# iterations=" + std::to_string(t.iterations.first) + "," + std::to_string(t.iterations.second) + "\n";
  out += "# residuals=" + format_double(t.residuals.first) + "," + format_double(t.residuals.second) + "\n";
  out += "# eigenvalues=" + format_double(t.eigenvalues.first) + "," + format_double(t.eigenvalues.second) + "\n";
  out += "partition,r,b,v,w\n";
  for (std::size_t i = 0; i < t.r.size(); ++i) {
    out += '"' + format((*t.order)[i]) + "\"," + format_double(t.r[i]) + ',' + format_double(t.b[i]) + ',' +
           format_double(t.v[i]) + ',' + format_double(t.w[i]) + '\n';
  }
  return out;
}

LoadingTable parse_loadings(std::string_view payload, int n) {
  const auto lines = lines_of(payload);
  if (lines.size() < 6 || lines[0] != "# loadings n=" + std::to_string(n) + " version=1") {
    throw DomainError("loadings header does not match n=" + std::to_string(n));
  }
  auto pair_of = [](std::string_view line, std::string_view key) {
    const std::string prefix = "# " + std::string(key) + "=";
    if (!line.starts_with(prefix)) throw DomainError("loadings payload lacks " + std::string(key));
    const auto cells = split_csv(line.substr(prefix.size()));
    if (cells.size() != 2) throw DomainError("malformed " + std::string(key) + " line");
    return std::pair{cells[0], cells[1]};
  };
  LoadingTable t;
  t.n = n;
  t.order = shared_partitions(n);
  const auto it = pair_of(lines[2], "iterations");
  t.iterations = {static_cast<int>(parse_double(it.first)), static_cast<int>(parse_double(it.second))};
  const auto res = pair_of(lines[3], "residuals");
  t.residuals = {parse_double(res.first), parse_double(res.second)};
  const auto eig = pair_of(lines[4], "eigenvalues");
  t.eigenvalues = {parse_double(eig.first), parse_double(eig.second)};
  const std::size_t p = t.order->size();
  for (std::size_t l = 6; l < lines.size(); ++l) {
    if (lines[l].empty()) continue;
    const auto cells = split_csv(lines[l]);
    if (cells.size() != 5) throw DomainError("malformed loadings row");
    const std::size_t i = t.r.size();
    if (i >= p || parse_partition(cells[0], n) != (*t.order)[i]) throw DomainError("loadings rows out of order");
    t.r.push_back(parse_double(cells[1]));
    t.b.push_back(parse_double(cells[2]));
    t.v.push_back(parse_double(cells[3]));
    t.w.push_back(parse_double(cells[4]));
  }
  if (t.r.size() != p) throw DomainError("loadings payload has " + std::to_string(t.r.size()) + " rows, expected " + std::to_string(p));
  return t;
}

namespace {

nlohmann::ordered_json threshold_json(const std::optional<Threshold>& t) {
  if (!t) return nullptr;
  return {{"value", t->value},
          {"lambda", format(t->attained_by.lambda)},
          {"mu", format(t->attained_by.mu)},
          {"nu", format(t->attained_by.nu)}};
}

std::optional<Threshold> threshold_from(const nlohmann::json& j, int n) {
  if (j.is_null()) return std::nullopt;
  return Threshold{j.at("value").get<double>(),
                   Triple(parse_partition(j.at("lambda").get<std::string>(), n),
                          parse_partition(j.at("mu").get<std::string>(), n),
                          parse_partition(j.at("nu").get<std::string>(), n))};
}

}  // namespace

std::string serialize_thresholds(const Thresholds& th) {
  nlohmann::ordered_json j;
  j["n"] = th.n;
  j["provenance"] = to_string(th.provenance);
  j["r_star"] = threshold_json(th.r_star);
  j["b_star"] = threshold_json(th.b_star);
  return j.dump(2) + "\n";
}

Thresholds parse_thresholds(std::string_view payload, int n) {
  try {
    const auto j = nlohmann::json::parse(payload);
    Thresholds th;
    th.n = j.at("n").get<int>();
    if (th.n != n) throw DomainError("thresholds payload is for n=" + std::to_string(th.n));
    const auto prov = j.at("provenance").get<std::string>();
    if (prov != "exhaustive" && prov != "conjectured") throw DomainError("unknown provenance '" + prov + "'");
    th.provenance = prov == "exhaustive" ? Provenance::exhaustive : Provenance::conjectured;
    th.r_star = threshold_from(j.at("r_star"), n);
    th.b_star = threshold_from(j.at("b_star"), n);
    return th;
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("malformed thresholds payload: ") + e.what());
  }
}

ComputeContext::ComputeContext(std::optional<Cache> cache, unsigned threads, IterationMode mode, bool allow_long)
    : cache_(std::move(cache)), threads_(threads), mode_(mode), allow_long_(allow_long) {}

void ComputeContext::warn(const std::string& message) const {
  if (warn_) *warn_ << "warning: " << message << '\n';
}

std::shared_ptr<const CharacterTable> ComputeContext::table(int n) {
  if (auto it = tables_.find(n); it != tables_.end()) return it->second;
  std::shared_ptr<const CharacterTable> made;
  if (cache_) {
    auto hit = cache_->read("chartable", n, "csv");
    if (hit.status == Cache::Status::corrupt) warn("recomputing corrupt cache entry: " + hit.detail);
    if (hit.status == Cache::Status::hit) {
      try {
        made = std::make_shared<const CharacterTable>(parse_table(hit.payload, n));
      } catch (const DomainError& e) {
        warn(std::string("recomputing unreadable cache entry: ") + e.what());
      }
    }
  }
  if (!made) {
    TableOptions opts;
    opts.threads = threads_;
    made = std::make_shared<const CharacterTable>(build_table(n, opts));
    if (cache_) cache_->write("chartable", n, "csv", serialize_table(*made));
  }
  tables_[n] = made;
  return made;
}

std::shared_ptr<const LoadingTable> ComputeContext::loadings(int n) {
  if (auto it = loadings_.find(n); it != loadings_.end()) return it->second;
  std::shared_ptr<const LoadingTable> made;
  const std::string tag = mode_tag(mode_);
  if (cache_) {
    auto hit = cache_->read("loadings", n, "csv", tag);
    if (hit.status == Cache::Status::corrupt) warn("recomputing corrupt cache entry: " + hit.detail);
    if (hit.status == Cache::Status::hit) {
      try {
        made = std::make_shared<const LoadingTable>(parse_loadings(hit.payload, n));
      } catch (const DomainError& e) {
        warn(std::string("recomputing unreadable cache entry: ") + e.what());
      }
    }
  }
  if (!made) {
    made = std::make_shared<const LoadingTable>(compute_loadings(n, mode_));
    if (cache_) cache_->write("loadings", n, "csv", serialize_loadings(*made, mode_), tag);
  }
  loadings_[n] = made;
  return made;
}

Thresholds ComputeContext::thresholds(int n) {
  const std::string tag = mode_tag(mode_);
  if (cache_) {
    auto hit = cache_->read("thresholds", n, "json", tag);
    if (hit.status == Cache::Status::corrupt) warn("recomputing corrupt cache entry: " + hit.detail);
    if (hit.status == Cache::Status::hit) {
      try {
        return parse_thresholds(hit.payload, n);
      } catch (const DomainError& e) {
        warn(std::string("recomputing unreadable cache entry: ") + e.what());
      }
    }
  }
  if (n > default_scan_limit && !allow_long_) {
    throw ResourceError("thresholds for n=" + std::to_string(n) + " need an exhaustive scan above the default limit of n=" +
                        std::to_string(default_scan_limit) + "; pass --long or warm the cache with `scan --n " +
                        std::to_string(n) + " --long`");
  }
  ScanOptions options;
  options.threads = threads_;
  options.allow_long = allow_long_;
  return scan(n, options).thresholds;
}

ScanResult ComputeContext::scan(int n, ScanOptions options) {
  options.threads = threads_;
  options.allow_long = options.allow_long || allow_long_;
  const auto t = table(n);
  const auto l = loadings(n);
  ScanResult result = kronload::scan(n, *t, *l, options);
  if (cache_) cache_->write("thresholds", n, "json", serialize_thresholds(result.thresholds), mode_tag(mode_));
  return result;
}

}  // namespace kronload
