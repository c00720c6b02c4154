#include <doctest.h>

#include <cmath>
#include <tuple>

#include "kronload/error.hpp"
#include "kronload/export.hpp"
#include "kronload/thresholds.hpp"
#include "oracles.hpp"

using namespace kronload;

namespace {

struct Brute {
  double r_star = INFINITY, b_star = INFINITY;
  std::tuple<std::size_t, std::size_t, std::size_t> r_arg{}, b_arg{};
  std::uint64_t nonzero = 0, zero = 0, r_below = 0, b_below = 0, depth_violating = 0;
};

// Every ordered triple, coefficients from the rational inner product. The
// argmin keeps the lexicographically smallest sorted-descending triple among
// values within the tie tolerance.
Brute brute_force(const CharacterTable& t, const LoadingTable& l) {
  const std::size_t p = t.size();
  const auto& order = t.order();
  std::vector<std::uint8_t> nz(p * p * p);
  Brute out;
  auto sorted_key = [&](std::size_t a, std::size_t b, std::size_t c) {
    std::array<std::size_t, 3> s{a, b, c};
    std::sort(s.begin(), s.end());
    return std::make_tuple(s[0], s[1], s[2]);
  };
  auto lex_smaller = [&](const auto& x, const auto& y) {
    // Larger index means lexicographically smaller; compare lambda first.
    const Triple tx(order[std::get<0>(x)], order[std::get<1>(x)], order[std::get<2>(x)]);
    const Triple ty(order[std::get<0>(y)], order[std::get<1>(y)], order[std::get<2>(y)]);
    for (auto [a, b] : {std::pair{&tx.lambda, &ty.lambda}, std::pair{&tx.mu, &ty.mu}, std::pair{&tx.nu, &ty.nu}}) {
      const auto c = compare_lex(*a, *b);
      if (c != 0) return c < 0;
    }
    return false;
  };
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j)
      for (std::size_t k = 0; k < p; ++k) {
        const bool nonzero = oracle::kronecker_rational(t, i, j, k) != 0;
        nz[(i * p + j) * p + k] = nonzero;
        const double r = l.r[i] + l.r[j] + l.r[k];
        const double b = l.b[i] + l.b[j] + l.b[k];
        if (!depth_admissible(Triple(order[i], order[j], order[k]))) ++out.depth_violating;
        if (nonzero) {
          ++out.nonzero;
          if (r < out.r_star - 1e-9 || (std::abs(r - out.r_star) <= 1e-9 && lex_smaller(sorted_key(i, j, k), out.r_arg)))
            out.r_arg = sorted_key(i, j, k);
          out.r_star = std::min(out.r_star, r);
        } else {
          ++out.zero;
          if (b < out.b_star - 1e-9 || (std::abs(b - out.b_star) <= 1e-9 && lex_smaller(sorted_key(i, j, k), out.b_arg)))
            out.b_arg = sorted_key(i, j, k);
          out.b_star = std::min(out.b_star, b);
        }
      }
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j)
      for (std::size_t k = 0; k < p; ++k) {
        if (l.r[i] + l.r[j] + l.r[k] < out.r_star) ++out.r_below;
        if (l.b[i] + l.b[j] + l.b[k] < out.b_star) ++out.b_below;
      }
  return out;
}

Triple triple_of(const PartitionSet& order, std::tuple<std::size_t, std::size_t, std::size_t> t) {
  return Triple(order[std::get<0>(t)], order[std::get<1>(t)], order[std::get<2>(t)]);
}

ScanResult run_scan(int n, unsigned threads = 0, bool samples = false) {
  const auto table = build_table(n);
  const auto loadings = compute_loadings(n);
  ScanOptions options;
  options.threads = threads;
  options.collect_samples = samples;
  return scan(n, table, loadings, options);
}

}  // namespace

TEST_SUITE("thresholds") {
  TEST_CASE("scan agrees with brute force over ordered triples") {
    for (int n = 3; n <= 8; ++n) {
      CAPTURE(n);
      const auto table = build_table(n);
      const auto loadings = compute_loadings(n);
      const auto res = scan(n, table, loadings);
      const auto ref = brute_force(table, loadings);
      const auto p = static_cast<std::uint64_t>(table.size());
      CHECK(res.total_triples == p * p * p);
      CHECK(res.nonzero_count == ref.nonzero);
      CHECK(res.zero_count == ref.zero);
      CHECK(res.depth_violating_count == ref.depth_violating);
      CHECK(res.depth_violating_nonzero == 0);
      REQUIRE(res.thresholds.r_star);
      REQUIRE(res.thresholds.b_star);
      CHECK(std::abs(res.thresholds.r_star->value - ref.r_star) <= 1e-9);
      CHECK(std::abs(res.thresholds.b_star->value - ref.b_star) <= 1e-9);
      CHECK(res.thresholds.r_star->attained_by == triple_of(table.order(), ref.r_arg).sorted());
      CHECK(res.thresholds.b_star->attained_by == triple_of(table.order(), ref.b_arg).sorted());
      CHECK(res.r_below_count == ref.r_below);
      CHECK(res.b_below_count == ref.b_below);
      CHECK(res.thresholds.provenance == Provenance::exhaustive);
    }
  }

  TEST_CASE("n=6 thresholds and attaining triples") {
    const auto res = run_scan(6);
    CHECK(std::abs(res.thresholds.r_star->value - 90.9986) <= 1e-3);
    CHECK(res.thresholds.r_star->attained_by == Triple(Partition({3, 3}), Partition({2, 2, 2}), Partition::column(6)));
    CHECK(std::abs(res.thresholds.b_star->value - 59.7812) <= 1e-3);
    const Partition d({2, 2, 1, 1});
    CHECK(res.thresholds.b_star->attained_by == Triple(d, d, d));
  }

  TEST_CASE("orbit accounting up to n=14") {
    for (int n = 3; n <= 14; ++n) {
      const auto res = run_scan(n);
      const auto p = static_cast<std::uint64_t>(oracle::partition_count(n));
      CHECK(res.orbit_total == p * p * p);
      CHECK(res.total_triples == p * p * p);
      CHECK(res.nonzero_count + res.zero_count == res.total_triples);
      CHECK(res.sorted_triples == p * (p + 1) * (p + 2) / 6);
      CHECK(res.r_hist.nonzero.total() + res.r_hist.zero.total() == res.total_triples);
      CHECK(res.b_hist.depth_violating.total() == res.depth_violating_count);
    }
  }

  TEST_CASE("soundness of both certificates up to n=12") {
    for (int n = 3; n <= 12; ++n) {
      const auto res = run_scan(n, 0, true);
      REQUIRE(res.samples);
      const auto& s = *res.samples;
      const double r_star = res.thresholds.r_star->value, b_star = res.thresholds.b_star->value;
      std::uint64_t bad = 0;
      for (std::size_t i = 0; i < s.r.size(); ++i) {
        if (s.r[i] < r_star && s.nonzero[i]) ++bad;
        if (s.b[i] < b_star && !s.nonzero[i]) ++bad;
      }
      CHECK(bad == 0);
      CHECK(s.r.size() == res.sorted_triples);
    }
  }

  TEST_CASE("depth-violating triples lie above r_star") {
    for (int n = 6; n <= 12; ++n) {
      const auto table = build_table(n);
      const auto loadings = compute_loadings(n);
      const auto res = scan(n, table, loadings);
      const double m = depth_filter_min_r(n, loadings, table);
      CHECK(m > res.thresholds.r_star->value);
      CHECK(m == res.min_r_depth_violating);
    }
    CHECK(depth_filter_min_r(12, compute_loadings(12)) > 74.6018);
  }

  TEST_CASE("depth filter at n=2") {
    // Only r-loadings are needed; Y_2 has a well-defined Perron vector.
    LoadingTable t;
    t.n = 2;
    t.order = shared_partitions(2);
    const MatVec y = [&](std::span<const double> x, std::span<double> out) { similitude_matvec(*t.order, x, out); };
    t.r = normalize_loadings(power_iteration(y, 2, IterationMode::converge()).vector, "r-loadings");
    const double m = depth_filter_min_r(2, t);
    CHECK(std::isfinite(m));
    CHECK(m == 200.0);  // ((2),(2),(1,1))
  }

  TEST_CASE("results do not depend on the thread count") {
    for (int n : {9, 11}) {
      const auto a = run_scan(n, 1, true);
      const auto b = run_scan(n, 3, true);
      CHECK(scan_json(a) == scan_json(b));
      CHECK(histogram_csv(a.r_hist) == histogram_csv(b.r_hist));
      CHECK(histogram_csv(a.b_hist) == histogram_csv(b.b_hist));
      CHECK(a.r_moments.all.mean() == b.r_moments.all.mean());
      CHECK(a.b_moments.nonzero.variance() == b.b_moments.nonzero.variance());
      CHECK(a.samples->r == b.samples->r);
      CHECK(a.samples->nonzero == b.samples->nonzero);
      CHECK(a.thresholds.r_star->attained_by == b.thresholds.r_star->attained_by);
    }
  }

  TEST_CASE("scan refuses large n without opt-in") {
    const auto table = build_table(4);
    const auto loadings = compute_loadings(4);
    CHECK_THROWS_AS(scan(17, table, loadings), DomainError);
    LoadingTable big;
    big.n = 17;
    CharacterTable t17(shared_partitions(17), std::vector<std::int64_t>(297 * 297, 0));
    CHECK_THROWS_AS(scan(17, t17, big), ResourceError);
  }

  TEST_CASE("classify") {
    const auto table = build_table(6);
    const auto loadings = compute_loadings(6);
    const auto res = scan(6, table, loadings);
    const Partition top = Partition::row(6);
    const auto v = classify(Triple(top, top, top), res.thresholds, loadings);
    CHECK(v.kind == Verdict::Kind::unknown);
    CHECK(v.rule == "none");
    CHECK(v.r == 300.0);

    std::size_t zero_verdicts = 0;
    for (const auto& a : table.order())
      for (const auto& b : table.order())
        for (const auto& c : table.order()) {
          const Triple t(a, b, c);
          const auto verdict = classify(t, res.thresholds, loadings);
          if (verdict.kind == Verdict::Kind::provably_zero) {
            ++zero_verdicts;
            CHECK(kron(t, table).is_zero());
            CHECK(verdict.rule == "r<r_star");
            CHECK(verdict.margin > 0);
          } else if (verdict.kind == Verdict::Kind::provably_nonzero) {
            CHECK_FALSE(kron(t, table).is_zero());
          }
        }
    CHECK(zero_verdicts > 0);

    Thresholds conj = res.thresholds;
    conj.provenance = Provenance::conjectured;
    CHECK(classify(Triple(top, top, top), conj, loadings).advisory);

    Thresholds broken = res.thresholds;
    broken.r_star->value = 1000.0;
    broken.b_star->value = 1000.0;
    CHECK_THROWS_AS(classify(Triple(top, top, top), broken, loadings), DomainError);
    CHECK_THROWS_AS(classify(Triple(Partition({3}), Partition({3}), Partition({3})), res.thresholds, loadings),
                    DomainError);
  }

  TEST_CASE("conjectured thresholds agree with exhaustive scans") {
    for (int n : {8, 12}) {
      const auto loadings = compute_loadings(n);
      const auto res = scan(n, build_table(n), loadings);
      const auto c = conjectured_r_star(n, loadings);
      CHECK(std::abs(c.value - res.thresholds.r_star->value) <= 1e-3);
    }
    CHECK(std::abs(conjectured_r_star(8, compute_loadings(8)).value - 79.1637) <= 1e-3);
    for (int n : {6, 9, 12}) {
      const auto table = build_table(n);
      const auto loadings = compute_loadings(n);
      const auto res = scan(n, table, loadings);
      const auto c = conjectured_b_star(n, table, loadings);
      CHECK(std::abs(c.value - res.thresholds.b_star->value) <= 1e-3);
      CHECK(kron(c.attained_by, table).is_zero());
    }
    const auto t12 = build_table(12);
    const auto c12 = conjectured_b_star(12, t12, compute_loadings(12));
    CHECK(c12.attained_by.lambda == parse_partition("3,3,2,1^4"));
    CHECK_THROWS_AS(conjectured_r_star(10, compute_loadings(10)), DomainError);
    CHECK_THROWS_AS(conjectured_b_star(10, build_table(10), compute_loadings(10)), DomainError);
  }

  TEST_CASE("orbit sizes") {
    CHECK(orbit_size(2, 2, 2) == 1);
    CHECK(orbit_size(1, 2, 2) == 3);
    CHECK(orbit_size(1, 1, 2) == 3);
    CHECK(orbit_size(0, 1, 2) == 6);
  }
}
