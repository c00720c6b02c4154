#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "json.hpp"
#include "kronload/cache.hpp"
#include "kronload/cli.hpp"
#include "kronload/error.hpp"
#include "kronload/export.hpp"

using namespace kronload;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    std::random_device rd;
    path = fs::temp_directory_path() / ("kronload-test-" + std::to_string(rd()) + std::to_string(rd()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args, const fs::path& cache) {
  std::vector<std::string> full{"kronload", "--cache", cache.string()};
  full.insert(full.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : full) argv.push_back(s.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

std::size_t count_of(const std::string& hay, const std::string& needle) {
  std::size_t c = 0;
  for (auto pos = hay.find(needle); pos != std::string::npos; pos = hay.find(needle, pos + 1)) ++c;
  return c;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("kron prints the coefficient") {
    TempDir tmp;
    const auto r = run({"kron", "--n", "3", "--lambda", "2,1", "--mu", "2,1", "--nu", "2,1"}, tmp.path);
    CHECK(r.code == 0);
    CHECK(r.out == "1\n");
    CHECK(r.err.empty());
  }

  TEST_CASE("kron without nu prints the decomposition") {
    TempDir tmp;
    const auto r = run({"kron", "--n", "3", "--lambda", "2,1", "--mu", "2,1"}, tmp.path);
    CHECK(r.code == 0);
    CHECK(r.out == "nu,g\n\"3\",1\n\"2,1\",1\n\"1^3\",1\n");
  }

  TEST_CASE("exit codes") {
    TempDir tmp;
    auto r = run({"kron", "--n", "4", "--lambda", "2,1", "--mu", "2,2", "--nu", "4"}, tmp.path);
    CHECK(r.code == 2);
    CHECK(r.err.rfind("error[2]:", 0) == 0);
    r = run({"kron", "--n", "4", "--lambda", "2,x", "--mu", "2,2", "--nu", "4"}, tmp.path);
    CHECK(r.code == 2);
    r = run({"frobnicate"}, tmp.path);
    CHECK(r.code == 1);
    CHECK(r.err.rfind("error[1]:", 0) == 0);
    r = run({"--iters", "21", "--tol", "1e-9", "loadings", "--n", "6"}, tmp.path);
    CHECK(r.code == 1);
    r = run({"--format", "xml", "partitions", "--n", "3"}, tmp.path);
    CHECK(r.code == 1);
    r = run({"scan", "--n", "17"}, tmp.path);
    CHECK(r.code == 4);
    CHECK(r.err.rfind("error[4]:", 0) == 0);
    r = run({"thresholds", "--n", "18"}, tmp.path);
    CHECK(r.code == 4);
    CHECK(r.err.find("--long") != std::string::npos);
    r = run({"conjecture", "--n", "10"}, tmp.path);
    CHECK(r.code == 2);
    r = run({"loadings", "--n", "2"}, tmp.path);
    CHECK(r.code == 2);
  }

  TEST_CASE("partitions listing") {
    TempDir tmp;
    auto r = run({"partitions", "--n", "4"}, tmp.path);
    CHECK(r.out == "4\n3,1\n2^2\n2,1^2\n1^4\n");
    r = run({"partitions", "--n", "4", "--plain"}, tmp.path);
    CHECK(r.out == "4\n3,1\n2,2\n2,1,1\n1,1,1,1\n");
    r = run({"partitions", "--n", "50", "--count"}, tmp.path);
    CHECK(r.out == "204226\n");
    r = run({"--format", "json", "partitions", "--n", "3"}, tmp.path);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["count"] == 3);
    CHECK(j["partitions"][1] == "2,1");
  }

  TEST_CASE("chartable output") {
    TempDir tmp;
    const auto r = run({"chartable", "--n", "3"}, tmp.path);
    CHECK(r.out == "lambda,\"3\",\"2,1\",\"1^3\"\n\"3\",1,1,1\n\"2,1\",-1,0,2\n\"1^3\",1,-1,1\n");
    const auto j = nlohmann::json::parse(run({"--format", "json", "chartable", "--n", "4"}, tmp.path).out);
    CHECK(j["values"].size() == 5);
    CHECK(j["classes"][4]["class_size"] == 1);
  }

  TEST_CASE("loadings output") {
    TempDir tmp;
    const auto r = run({"loadings", "--n", "6"}, tmp.path);
    CHECK(r.code == 0);
    CHECK(r.out.rfind("partition,r_loading,b_loading\n\"6\",100.0000,100.0000\n", 0) == 0);
    CHECK(r.out.find("\"3^2\",57.6803,43.0") != std::string::npos);
    const auto file = tmp.path / "l.csv";
    CHECK(run({"loadings", "--n", "6", "--output", file.string()}, tmp.path).code == 0);
    CHECK(slurp(file) == r.out);
    const auto fixed21 = run({"--iters", "21", "loadings", "--n", "6"}, tmp.path);
    CHECK(fixed21.code == 0);
    CHECK(fs::exists(tmp.path / "loadings" / "n=6.v1.fixed21.csv"));
    const auto j = nlohmann::json::parse(run({"--format", "json", "loadings", "--n", "6"}, tmp.path).out);
    CHECK(j["n"] == 6);
  }

  TEST_CASE("scan JSON and exported files") {
    TempDir tmp;
    const auto dir = tmp.path / "out";
    const auto r = run({"scan", "--n", "6", "--out", dir.string()}, tmp.path);
    REQUIRE(r.code == 0);
    CHECK(r.out.find("\"r_star\": 90.9986") != std::string::npos);
    CHECK(r.out.find("\"total_triples\": 1331") != std::string::npos);
    for (const char* f : {"scan.json", "hist_r.csv", "hist_b.csv", "hist_r.svg", "hist_b.svg"}) CHECK(fs::exists(dir / f));
    CHECK(slurp(dir / "scan.json") == r.out);
    CHECK(slurp(dir / "hist_r.csv").rfind("bin_left,bin_right,count_nonzero,count_zero,count_depth_violating\n", 0) == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["fits"]["r"]["family"] == "normal");
    CHECK(j["fits"]["b"]["family"] == "gamma");

    const auto r10 = run({"scan", "--n", "10"}, tmp.path);
    CHECK(r10.out.find("\"b_star\": 46.6592") != std::string::npos);
  }

  TEST_CASE("identical invocations give identical bytes across thread counts") {
    TempDir a, b;
    const auto one = run({"--threads", "1", "scan", "--n", "9", "--out", (a.path / "o").string()}, a.path);
    const auto four = run({"--threads", "4", "scan", "--n", "9", "--out", (b.path / "o").string()}, b.path);
    CHECK(one.out == four.out);
    for (const char* f : {"hist_r.csv", "hist_b.csv", "hist_r.svg", "hist_b.svg"})
      CHECK(slurp(a.path / "o" / f) == slurp(b.path / "o" / f));
    CHECK(run({"--threads", "1", "loadings", "--n", "12"}, a.path).out ==
          run({"--threads", "3", "--no-cache", "loadings", "--n", "12"}, b.path).out);
  }

  TEST_CASE("thresholds and classify") {
    TempDir tmp;
    auto r = run({"thresholds", "--n", "6"}, tmp.path);
    CHECK(r.code == 0);
    CHECK(r.out ==
          "n,kind,value,lambda,mu,nu,provenance\n"
          "6,r_star,90.9986,\"3^2\",\"2^3\",\"1^6\",exhaustive\n"
          "6,b_star,59.7812,\"2^2,1^2\",\"2^2,1^2\",\"2^2,1^2\",exhaustive\n");
    CHECK(fs::exists(tmp.path / "thresholds" / "n=6.v1.json"));
    r = run({"classify", "--n", "6", "--lambda", "6", "--mu", "6", "--nu", "6"}, tmp.path);
    CHECK(r.out.find("\nunknown,none,300.0000,300.0000,") != std::string::npos);
    r = run({"--format", "json", "classify", "--n", "6", "--lambda", "1^6", "--mu", "1^6", "--nu", "2,1^4"}, tmp.path);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["verdict"] == "provably_zero");
    CHECK(j["rule"] == "r<r_star");
  }

  TEST_CASE("conjecture and stats") {
    TempDir tmp;
    auto r = run({"conjecture", "--n", "12"}, tmp.path);
    CHECK(r.code == 0);
    CHECK(r.out.find("12,r_star,74.6018,\"3^4\",\"2^6\",\"2^6\",conjectured") != std::string::npos);
    CHECK(r.out.find("12,b_star,47.3571,\"3^2,2,1^4\"") != std::string::npos);
    r = run({"--format", "json", "stats", "--n", "14"}, tmp.path);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(std::abs(j["triples"]["r_mean"].get<double>() - 148.86) <= 0.01);
    CHECK(std::abs(j["triples"]["b_mean"].get<double>() - 72.07) <= 0.01);
    r = run({"stats", "--n", "8", "--exhaustive"}, tmp.path);
    CHECK(r.out.find("triples_nonzero,") != std::string::npos);
    CHECK(r.out.find("gamma(b),shape=") != std::string::npos);
  }

  TEST_CASE("seed is accepted and ignored") {
    TempDir tmp;
    CHECK(run({"--seed", "5", "partitions", "--n", "3"}, tmp.path).out ==
          run({"partitions", "--n", "3"}, tmp.path).out);
  }

  TEST_CASE("verify quick scope passes") {
    TempDir tmp;
    const auto r = run({"verify", "--scope", "quick"}, tmp.path);
    CHECK(r.code == 0);
    CHECK(r.out.find("FAIL") == std::string::npos);
  }

  TEST_CASE("corrupt cache entries are detected and recomputed") {
    TempDir tmp;
    const auto good = run({"chartable", "--n", "7"}, tmp.path);
    const auto path = tmp.path / "chartable" / "n=7.v1.csv";
    REQUIRE(fs::exists(path));
    std::string bytes = slurp(path);
    bytes[bytes.size() / 2] = bytes[bytes.size() / 2] == '1' ? '2' : '1';
    std::ofstream(path, std::ios::binary) << bytes;
    const auto again = run({"chartable", "--n", "7"}, tmp.path);
    CHECK(again.code == 0);
    CHECK(again.out == good.out);
    CHECK(again.err.find("corrupt") != std::string::npos);
    // The recomputed entry replaced the damaged one.
    CHECK(run({"chartable", "--n", "7"}, tmp.path).err.empty());

    Cache cache(tmp.path);
    cache.write("loadings", 5, "csv", "not a loadings file");
    const auto l = run({"loadings", "--n", "5"}, tmp.path);
    CHECK(l.code == 0);
    CHECK(l.err.find("warning:") != std::string::npos);
  }

  TEST_CASE("no-cache leaves the directory empty") {
    TempDir tmp;
    CHECK(run({"--no-cache", "chartable", "--n", "5"}, tmp.path).code == 0);
    CHECK(fs::is_empty(tmp.path));
  }
}

TEST_SUITE("cache") {
  TEST_CASE("cache files carry a checksum") {
    TempDir tmp;
    Cache cache(tmp.path);
    cache.write("thresholds", 4, "json", "{}\n");
    const auto path = cache.path_for("thresholds", 4, "json");
    CHECK(path == tmp.path / "thresholds" / "n=4.v1.json");
    CHECK(slurp(path).rfind("# checksum fnv1a64=", 0) == 0);
    auto hit = cache.read("thresholds", 4, "json");
    CHECK(hit.status == Cache::Status::hit);
    CHECK(hit.payload == "{}\n");
    CHECK(cache.read("thresholds", 5, "json").status == Cache::Status::missing);
    std::ofstream(path, std::ios::app) << "x";
    CHECK(cache.read("thresholds", 4, "json").status == Cache::Status::corrupt);
    CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  }

  TEST_CASE("character tables round-trip exactly") {
    for (int n = 1; n <= 14; ++n) {
      const auto t = build_table(n);
      CHECK(parse_table(serialize_table(t), n) == t);
    }
    CHECK_THROWS_AS(parse_table(serialize_table(build_table(5)), 6), DomainError);
  }

  TEST_CASE("loadings round-trip bit for bit") {
    for (int n = 3; n <= 14; ++n) {
      const auto t = compute_loadings(n);
      const auto back = parse_loadings(serialize_loadings(t, {}), n);
      CHECK(back.r == t.r);
      CHECK(back.b == t.b);
      CHECK(back.v == t.v);
      CHECK(back.w == t.w);
      CHECK(back.iterations == t.iterations);
      CHECK(loadings_csv(back) == loadings_csv(t));
    }
    CHECK(mode_tag({}) == "");
    CHECK(mode_tag(IterationMode::fixed(21)) == "fixed21");
  }

  TEST_CASE("thresholds round-trip") {
    const auto res = scan(7, build_table(7), compute_loadings(7));
    const auto back = parse_thresholds(serialize_thresholds(res.thresholds), 7);
    CHECK(back.r_star->value == res.thresholds.r_star->value);
    CHECK(back.b_star->attained_by == res.thresholds.b_star->attained_by);
    CHECK(back.provenance == Provenance::exhaustive);
    CHECK_THROWS_AS(parse_thresholds("{", 7), DomainError);
  }

  TEST_CASE("context reuses cached tables") {
    TempDir tmp;
    {
      ComputeContext ctx(Cache(tmp.path), 1, {}, false);
      ctx.table(9);
      ctx.loadings(9);
    }
    ComputeContext ctx(Cache(tmp.path), 1, {}, false);
    std::ostringstream warnings;
    ctx.set_warning_sink(&warnings);
    CHECK(*ctx.table(9) == build_table(9));
    CHECK(ctx.loadings(9)->r == compute_loadings(9).r);
    CHECK(warnings.str().empty());
  }
}

TEST_SUITE("export") {
  TEST_CASE("fixed formatting") {
    CHECK(fixed(90.99864, 4) == "90.9986");
    CHECK(fixed(0.0, 2) == "0.00");
    CHECK(round_to(1.23456, 2) == doctest::Approx(1.23));
  }

  TEST_CASE("SVG series colors") {
    const auto res = scan(12, build_table(12), compute_loadings(12));
    const auto svg = render_histogram_svg(res.r_hist, std::nullopt, "r-loadings, n=12");
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(count_of(svg, "class=\"series\"") == 3);
    CHECK(svg.find(color_nonzero) != std::string::npos);
    CHECK(svg.find(color_zero) != std::string::npos);
    CHECK(svg.find(color_depth_violating) != std::string::npos);
    CHECK(svg.find("class=\"fit\"") == std::string::npos);

    const auto fits = fit_scan(res);
    const Histogram* nz = &res.b_hist.nonzero;
    const auto overlay = render_histogram_svg({{"nonzero", color_nonzero, nz}}, fits.b_nonzero, "b-loadings");
    CHECK(count_of(overlay, "class=\"series\"") == 1);
    CHECK(overlay.find("class=\"fit\"") != std::string::npos);
    CHECK(std::abs(fits.b.p1 * fits.b.p2 - res.b_moments.all.mean()) <= 1e-12 * res.b_moments.all.mean());
  }

  TEST_CASE("empty class renders zero-height bars") {
    ClassHistograms h{Histogram::uniform(0, 10, 1), Histogram::uniform(0, 10, 1), Histogram::uniform(0, 10, 1)};
    h.nonzero.add(3.5, 4);
    const auto svg = render_histogram_svg(h, std::nullopt, "t");
    CHECK(count_of(svg, "class=\"series\"") == 3);
    CHECK(svg.find("height=\"0") != std::string::npos);
  }

  TEST_CASE("unwritable export target is a usage error") {
    TempDir tmp;
    const auto blocker = tmp.path / "file";
    std::ofstream(blocker) << "x";
    CHECK_THROWS_AS(write_text_file(blocker / "sub" / "a.txt", "y"), UsageError);
  }
}
