#include "kronload/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "kronload/cache.hpp"
#include "kronload/error.hpp"
#include "kronload/export.hpp"
#include "kronload/stats.hpp"
#include "kronload/thresholds.hpp"
#include "kronload/verify.hpp"

namespace kronload::cli {

namespace {

using Json = nlohmann::ordered_json;

struct Globals {
  std::string cache_dir;
  bool no_cache = false;
  unsigned threads = 0;
  std::string format = "csv";
  bool allow_long = false;
  std::optional<int> iters;
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;  // accepted for interface stability; unused
};

struct Args {
  int n = 0;
  std::string lambda, mu, nu;
  bool plain = false;
  bool count_only = false;
  std::string output;
  std::optional<int> count_decimals;
  std::string kind = "both";
  bool exhaustive = false;
  std::string scope = "full";
  bool verbose = false;
};

IterationMode mode_of(const Globals& g) {
  if (g.iters && g.tol) throw UsageError("--iters and --tol are mutually exclusive");
  if (g.iters) {
    if (*g.iters < 1) throw UsageError("--iters must be positive");
    return IterationMode::fixed(*g.iters);
  }
  if (g.tol) {
    if (!(*g.tol > 0.0)) throw UsageError("--tol must be positive");
    return IterationMode::converge(*g.tol);
  }
  return {};
}

ComputeContext make_context(const Globals& g, std::ostream& err) {
  std::optional<Cache> cache;
  if (!g.no_cache) cache.emplace(g.cache_dir.empty() ? default_cache_dir() : std::filesystem::path(g.cache_dir));
  ComputeContext ctx(std::move(cache), g.threads, mode_of(g), g.allow_long);
  ctx.set_warning_sink(&err);
  return ctx;
}

bool json(const Globals& g) { return g.format == "json"; }

Json big_json(const BigInt& v) {
  if (v.fits_slong_p()) return v.get_si();
  return v.get_str();
}

Json triple_json(const Triple& t) { return {format(t.lambda), format(t.mu), format(t.nu)}; }

std::string csv_triple(const Triple& t) {
  return '"' + format(t.lambda) + "\",\"" + format(t.mu) + "\",\"" + format(t.nu) + '"';
}

Triple read_triple(const Args& a) {
  return Triple(parse_partition(a.lambda, a.n), parse_partition(a.mu, a.n), parse_partition(a.nu, a.n));
}

void cmd_partitions(const Globals& g, const Args& a, std::ostream& out) {
  if (a.count_only) {
    if (a.n < 1) throw DomainError("n must be positive, got " + std::to_string(a.n));
    out << count_partitions(a.n).get_str() << '\n';
    return;
  }
  const PartitionSet set = enumerate(a.n);
  if (json(g)) {
    Json list = Json::array();
    for (const auto& p : set) list.push_back(format(p, !a.plain));
    out << Json{{"n", a.n}, {"count", set.size()}, {"partitions", list}}.dump(2) << '\n';
    return;
  }
  for (const auto& p : set) out << format(p, !a.plain) << '\n';
}

void cmd_chartable(const Globals& g, const Args& a, ComputeContext& ctx, std::ostream& out) {
  const auto t = ctx.table(a.n);
  const std::size_t p = t->size();
  if (json(g)) {
    Json rows = Json::array();
    for (std::size_t r = 0; r < p; ++r) {
      Json row = Json::array();
      for (std::size_t c = 0; c < p; ++c) row.push_back(big_json(t->value(r, c)));
      rows.push_back(row);
    }
    Json classes = Json::array();
    for (const auto& cl : t->classes()) {
      classes.push_back({{"cycle_type", format(cl.cycle_type)},
                         {"centralizer_order", big_json(cl.centralizer_order)},
                         {"class_size", big_json(cl.class_size)}});
    }
    out << Json{{"n", a.n}, {"classes", classes}, {"values", rows}}.dump() << '\n';
    return;
  }
  out << "lambda";
  for (const auto& rho : t->order()) out << ",\"" << format(rho) << '"';
  out << '\n';
  for (std::size_t r = 0; r < p; ++r) {
    out << '"' << format(t->order()[r]) << '"';
    for (std::size_t c = 0; c < p; ++c) out << ',' << t->value(r, c).get_str();
    out << '\n';
  }
}

void cmd_kron(const Globals& g, const Args& a, ComputeContext& ctx, std::ostream& out) {
  const Partition lambda = parse_partition(a.lambda, a.n);
  const Partition mu = parse_partition(a.mu, a.n);
  if (!a.nu.empty()) {
    const Partition nu = parse_partition(a.nu, a.n);
    const auto t = ctx.table(a.n);
    const KroneckerValue v = kron(Triple(lambda, mu, nu), *t);
    if (json(g)) {
      out << Json{{"n", a.n}, {"lambda", format(lambda)}, {"mu", format(mu)}, {"nu", format(nu)}, {"g", big_json(v.value)}}.dump()
          << '\n';
    } else {
      out << v.value.get_str() << '\n';
    }
    return;
  }
  const auto t = ctx.table(a.n);
  const auto row = kron_row(lambda, mu, *t);
  if (json(g)) {
    Json terms = Json::array();
    for (const auto& [nu, v] : row) {
      if (!v.is_zero()) terms.push_back({{"nu", format(nu)}, {"g", big_json(v.value)}});
    }
    out << Json{{"n", a.n}, {"lambda", format(lambda)}, {"mu", format(mu)}, {"decomposition", terms}}.dump(2) << '\n';
    return;
  }
  out << "nu,g\n";
  for (const auto& [nu, v] : row) {
    if (!v.is_zero()) out << '"' << format(nu) << "\"," << v.value.get_str() << '\n';
  }
}

void cmd_loadings(const Globals& g, const Args& a, ComputeContext& ctx, std::ostream& out) {
  const auto l = ctx.loadings(a.n);
  const std::string text = json(g) ? loadings_json(*l) : loadings_csv(*l);
  if (a.output.empty()) {
    out << text;
  } else {
    write_text_file(a.output, text);
  }
}

void cmd_scan(const Args& a, ComputeContext& ctx, std::ostream& out) {
  ScanOptions options;
  options.count_decimals = a.count_decimals;
  const ScanResult s = ctx.scan(a.n, options);
  if (!a.output.empty()) export_scan(s, a.output);
  out << scan_json(s);
}

std::string threshold_cell(const std::optional<Threshold>& t) { return t ? fixed(t->value, 4) : ""; }

void cmd_thresholds(const Globals& g, const Args& a, ComputeContext& ctx, std::ostream& out) {
  const Thresholds th = ctx.thresholds(a.n);
  if (json(g)) {
    Json j;
    j["n"] = th.n;
    j["r_star"] = th.r_star ? Json(round_to(th.r_star->value, 4)) : Json(nullptr);
    j["argmin_r"] = th.r_star ? triple_json(th.r_star->attained_by) : Json(nullptr);
    j["b_star"] = th.b_star ? Json(round_to(th.b_star->value, 4)) : Json(nullptr);
    j["argmin_b"] = th.b_star ? triple_json(th.b_star->attained_by) : Json(nullptr);
    j["provenance"] = to_string(th.provenance);
    out << j.dump(2) << '\n';
    return;
  }
  out << "n,kind,value,lambda,mu,nu,provenance\n";
  auto line = [&](const char* kind, const std::optional<Threshold>& t) {
    if (!t) return;
    out << th.n << ',' << kind << ',' << fixed(t->value, 4) << ',' << csv_triple(t->attained_by) << ','
        << to_string(th.provenance) << '\n';
  };
  line("r_star", th.r_star);
  line("b_star", th.b_star);
}

void cmd_classify(const Globals& g, const Args& a, ComputeContext& ctx, std::ostream& out) {
  const Triple t = read_triple(a);
  const auto l = ctx.loadings(a.n);
  const Thresholds th = ctx.thresholds(a.n);
  const Verdict v = classify(t, th, *l);
  if (json(g)) {
    Json j;
    j["n"] = a.n;
    j["triple"] = triple_json(t);
    j["verdict"] = to_string(v.kind);
    j["rule"] = v.rule;
    j["r"] = round_to(v.r, 4);
    j["b"] = round_to(v.b, 4);
    j["r_star"] = th.r_star ? Json(round_to(th.r_star->value, 4)) : Json(nullptr);
    j["b_star"] = th.b_star ? Json(round_to(th.b_star->value, 4)) : Json(nullptr);
    j["margin"] = round_to(v.margin, 4);
    j["provenance"] = to_string(th.provenance);
    j["advisory"] = v.advisory;
    out << j.dump(2) << '\n';
    return;
  }
  out << "verdict,rule,r,b,r_star,b_star,margin,provenance,advisory\n"
      << to_string(v.kind) << ',' << v.rule << ',' << fixed(v.r, 4) << ',' << fixed(v.b, 4) << ','
      << threshold_cell(th.r_star) << ',' << threshold_cell(th.b_star) << ',' << fixed(v.margin, 4) << ','
      << to_string(th.provenance) << ',' << (v.advisory ? "true" : "false") << '\n';
}

void cmd_conjecture(const Globals& g, const Args& a, ComputeContext& ctx, std::ostream& out) {
  if (a.kind != "r" && a.kind != "b" && a.kind != "both") throw UsageError("--kind must be r, b or both");
  const bool want_r = a.kind == "r" || (a.kind == "both" && a.n % 4 == 0);
  const bool want_b = a.kind == "b" || (a.kind == "both" && a.n % 3 == 0);
  if (!want_r && !want_b) {
    throw DomainError("no conjecture applies to n=" + std::to_string(a.n) + " (needs n divisible by 4 or 3)");
  }
  std::vector<std::pair<std::string, Threshold>> results;
  const auto l = ctx.loadings(a.n);
  if (want_r) results.emplace_back("r_star", conjectured_r_star(a.n, *l));
  if (want_b) results.emplace_back("b_star", conjectured_b_star(a.n, *ctx.table(a.n), *l));
  if (json(g)) {
    Json j;
    j["n"] = a.n;
    for (const auto& [kind, t] : results) {
      j[kind] = round_to(t.value, 4);
      j[kind == "r_star" ? "argmin_r" : "argmin_b"] = triple_json(t.attained_by);
    }
    j["provenance"] = "conjectured";
    out << j.dump(2) << '\n';
    return;
  }
  out << "n,kind,value,lambda,mu,nu,provenance\n";
  for (const auto& [kind, t] : results) {
    out << a.n << ',' << kind << ',' << fixed(t.value, 4) << ',' << csv_triple(t.attained_by) << ",conjectured\n";
  }
}

Json fit_json(const FitParams& f) {
  if (f.family == FitParams::Family::normal) {
    return {{"family", "normal"}, {"mean", round_to(f.p1, 6)}, {"stddev", round_to(f.p2, 6)}};
  }
  return {{"family", "gamma"}, {"shape", round_to(f.p1, 6)}, {"scale", round_to(f.p2, 6)}};
}

void cmd_stats(const Globals& g, const Args& a, ComputeContext& ctx, std::ostream& out) {
  struct Row {
    std::string population;
    MomentSummary r, b;
  };
  std::vector<Row> rows;
  const auto l = ctx.loadings(a.n);
  const MomentSummary pr = moments(l->r);
  const MomentSummary pb = moments(l->b);
  rows.push_back({"partitions", pr, pb});
  rows.push_back({"triples", triple_moments(pr), triple_moments(pb)});
  if (a.exhaustive) {
    const ScanResult s = ctx.scan(a.n, {});
    rows.push_back({"triples_nonzero", summarize(s.r_moments.nonzero), summarize(s.b_moments.nonzero)});
    if (!s.r_moments.zero.empty()) rows.push_back({"triples_zero", summarize(s.r_moments.zero), summarize(s.b_moments.zero)});
  }
  const FitParams fr = fit_normal(rows[1].r.mean, rows[1].r.variance);
  const FitParams fb = fit_gamma(rows[1].b.mean, rows[1].b.variance);
  if (json(g)) {
    Json j;
    j["n"] = a.n;
    for (const auto& row : rows) {
      j[row.population] = {{"count", row.r.count},
                           {"r_mean", round_to(row.r.mean, 6)},
                           {"r_variance", round_to(row.r.variance, 6)},
                           {"b_mean", round_to(row.b.mean, 6)},
                           {"b_variance", round_to(row.b.variance, 6)}};
    }
    j["fits"] = {{"r", fit_json(fr)}, {"b", fit_json(fb)}};
    out << j.dump(2) << '\n';
    return;
  }
  out << "population,count,r_mean,r_variance,b_mean,b_variance\n";
  for (const auto& row : rows) {
    out << row.population << ',' << fixed(row.r.count, 0) << ',' << fixed(row.r.mean, 4) << ',' << fixed(row.r.variance, 4)
        << ',' << fixed(row.b.mean, 4) << ',' << fixed(row.b.variance, 4) << '\n';
  }
  out << "fit,param1,param2\n"
      << "normal(r),mean=" << fixed(fr.p1, 4) << ",stddev=" << fixed(fr.p2, 4) << '\n'
      << "gamma(b),shape=" << fixed(fb.p1, 4) << ",scale=" << fixed(fb.p2, 4) << '\n';
}

int cmd_verify(const Args& a, ComputeContext& ctx, std::ostream& out) {
  const VerifyScope scope = parse_scope(a.scope);
  const VerifyReport report = verify(scope, ctx);
  print_report(report, out, a.verbose);
  return report.ok() ? 0 : static_cast<int>(ExitCode::verification);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Partition loadings and Kronecker coefficients of symmetric groups", "kronload"};
  app.require_subcommand(1);
  Globals g;
  Args a;
  app.add_option("--cache", g.cache_dir, "Cache directory (default: $KRONLOAD_CACHE or the user cache dir)");
  app.add_flag("--no-cache", g.no_cache, "Neither read nor write the cache");
  app.add_option("--threads", g.threads, "Worker threads (0 = all cores)");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_flag("--long", g.allow_long, "Allow expensive exhaustive computations (n > 16)");
  app.add_option("--iters", g.iters, "Fixed power-iteration steps (21 reproduces the reference code)");
  app.add_option("--tol", g.tol, "Power-iteration convergence tolerance (default 1e-13)");
  app.add_option("--seed", g.seed, "Accepted and ignored; no computation is randomized");

  auto with_n = [&](CLI::App* sub) { sub->add_option("--n", a.n, "Size n")->required(); };
  auto with_triple = [&](CLI::App* sub, bool nu_required) {
    sub->add_option("--lambda", a.lambda, "First partition")->required();
    sub->add_option("--mu", a.mu, "Second partition")->required();
    auto* nu = sub->add_option("--nu", a.nu, "Third partition");
    if (nu_required) nu->required();
  };

  auto* partitions = app.add_subcommand("partitions", "List the partitions of n in descending lexicographic order");
  with_n(partitions);
  partitions->add_flag("--plain", a.plain, "Write runs without exponent notation");
  partitions->add_flag("--count", a.count_only, "Print p(n) only");
  auto* chartable = app.add_subcommand("chartable", "Character table of S_n");
  with_n(chartable);
  auto* kron_cmd = app.add_subcommand("kron", "Kronecker coefficient, or the decomposition of S_lambda x S_mu without --nu");
  with_n(kron_cmd);
  with_triple(kron_cmd, false);
  auto* loadings = app.add_subcommand("loadings", "r- and b-loadings of all partitions of n");
  with_n(loadings);
  loadings->add_option("--output", a.output, "Write to this file instead of stdout");
  auto* scan_cmd = app.add_subcommand("scan", "Exhaustive threshold scan over all triples");
  with_n(scan_cmd);
  scan_cmd->add_option("--out", a.output, "Directory for scan.json, histogram CSVs and SVGs");
  scan_cmd->add_option("--count-decimals", a.count_decimals,
                       "Round loadings to this many decimals when counting triples below the thresholds");
  auto* classify_cmd = app.add_subcommand("classify", "Apply the threshold criteria to one triple");
  with_n(classify_cmd);
  with_triple(classify_cmd, true);
  auto* thresholds = app.add_subcommand("thresholds", "Exhaustive r_star and b_star");
  with_n(thresholds);
  auto* conjecture = app.add_subcommand("conjecture", "Conjectured r_star (n = 4k) and b_star (n = 3k)");
  with_n(conjecture);
  conjecture->add_option("--kind", a.kind, "r, b or both")->check(CLI::IsMember({"r", "b", "both"}));
  auto* stats_cmd = app.add_subcommand("stats", "Moments of partition and triple loadings with distribution fits");
  with_n(stats_cmd);
  stats_cmd->add_flag("--exhaustive", a.exhaustive, "Also split triple moments by g = 0 / g != 0 via a scan");
  auto* verify_cmd = app.add_subcommand("verify", "Check results against the embedded reference tables");
  verify_cmd->add_option("--scope", a.scope, "quick, full or long")->check(CLI::IsMember({"quick", "full", "long"}));
  verify_cmd->add_flag("--verbose", a.verbose, "List every check");
  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error[" << static_cast<int>(ExitCode::usage) << "]: " << e.what() << '\n';
    return static_cast<int>(ExitCode::usage);
  }

  try {
    ComputeContext ctx = make_context(g, err);
    if (partitions->parsed()) cmd_partitions(g, a, out);
    if (chartable->parsed()) cmd_chartable(g, a, ctx, out);
    if (kron_cmd->parsed()) cmd_kron(g, a, ctx, out);
    if (loadings->parsed()) cmd_loadings(g, a, ctx, out);
    if (scan_cmd->parsed()) cmd_scan(a, ctx, out);
    if (classify_cmd->parsed()) cmd_classify(g, a, ctx, out);
    if (thresholds->parsed()) cmd_thresholds(g, a, ctx, out);
    if (conjecture->parsed()) cmd_conjecture(g, a, ctx, out);
    if (stats_cmd->parsed()) cmd_stats(g, a, ctx, out);
    if (verify_cmd->parsed()) return cmd_verify(a, ctx, out);
    return 0;
  } catch (const Error& e) {
    err << "error[" << static_cast<int>(e.code()) << "]: " << e.what() << '\n';
    return static_cast<int>(e.code());
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error[" << static_cast<int>(ExitCode::usage) << "]: " << e.what() << '\n';
    return static_cast<int>(ExitCode::usage);
  } catch (const std::bad_alloc&) {
    err << "error[" << static_cast<int>(ExitCode::resource) << "]: out of memory\n";
    return static_cast<int>(ExitCode::resource);
  }
}

}  // namespace kronload::cli
