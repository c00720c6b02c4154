#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "kronload/characters.hpp"
#include "kronload/kronecker.hpp"
#include "kronload/loadings.hpp"
#include "kronload/stats.hpp"

namespace kronload {

enum class Provenance { exhaustive, conjectured };

std::string to_string(Provenance p);

struct Threshold {
  double value = 0.0;
  Triple attained_by;  // sorted descending
};

// r_star: min r(t) over g(t) != 0. b_star: min b(t) over g(t) = 0; absent
// when every triple is nonzero (n = 1).
struct Thresholds {
  int n = 0;
  std::optional<Threshold> r_star;
  std::optional<Threshold> b_star;
  Provenance provenance = Provenance::exhaustive;
};

// Loading equality tolerance used when several triples attain a minimum.
inline constexpr double tie_tolerance = 1e-9;

// Largest n scanned exhaustively without an explicit opt-in.
inline constexpr int default_scan_limit = 16;

struct ScanOptions {
  unsigned threads = 0;
  bool allow_long = false;
  double histogram_width = 1.0;  // fixed grid over [0, 300]
  bool collect_samples = false;  // keep one entry per sorted triple
  // When set, r_below_count and b_below_count compare the exact thresholds
  // against triple sums of loadings rounded to this many decimals.
  std::optional<int> count_decimals;
};

// One histogram per class of triple over a common grid.
struct ClassHistograms {
  Histogram nonzero;
  Histogram zero;
  Histogram depth_violating;  // subset of zero by the depth theorem
};

struct ClassMoments {
  Moments all;
  Moments nonzero;
  Moments zero;
};

// Sorted representatives with their orbit sizes; filled when requested.
struct ScanSamples {
  std::vector<double> r;
  std::vector<double> b;
  std::vector<double> weight;
  std::vector<std::uint8_t> nonzero;
};

// All counts are over ordered triples.
struct ScanResult {
  Thresholds thresholds;
  std::uint64_t total_triples = 0;
  std::uint64_t nonzero_count = 0;
  std::uint64_t zero_count = 0;
  std::uint64_t r_below_count = 0;
  std::uint64_t b_below_count = 0;
  std::uint64_t depth_violating_count = 0;
  std::uint64_t depth_violating_nonzero = 0;  // 0 unless the depth theorem fails
  std::uint64_t sorted_triples = 0;
  std::uint64_t orbit_total = 0;  // sum of orbit sizes, equals total_triples
  double min_r_depth_violating = std::numeric_limits<double>::infinity();
  ClassHistograms r_hist;
  ClassHistograms b_hist;
  ClassMoments r_moments;
  ClassMoments b_moments;
  std::optional<ScanSamples> samples;
};

// Orbit size of a sorted index triple i <= j <= k under S_3.
inline std::uint64_t orbit_size(std::size_t i, std::size_t j, std::size_t k) {
  if (i == j && j == k) return 1;
  if (i == j || j == k) return 3;
  return 6;
}

// Exhaustive scan over sorted representatives lambda >= mu >= nu. Work is
// split by lambda; partial results are merged in lambda order, so the result
// does not depend on the thread count. Throws ResourceError for
// n > default_scan_limit unless options.allow_long.
ScanResult scan(int n, const CharacterTable& table, const LoadingTable& loadings, const ScanOptions& options = {});

struct Verdict {
  enum class Kind { provably_zero, provably_nonzero, unknown };
  Kind kind = Kind::unknown;
  std::string rule;  // "r<r_star", "b<b_star" or "none"
  double margin = 0.0;  // threshold minus triple loading for the rule that fired
  bool advisory = false;  // thresholds are conjectural
  double r = 0.0;
  double b = 0.0;
};

std::string to_string(Verdict::Kind k);

// Throws DomainError when both rules fire (inconsistent thresholds).
Verdict classify(const Triple& t, const Thresholds& th, const LoadingTable& loadings);

// min r(t) over sorted triples violating the depth condition; +inf if none.
double depth_filter_min_r(int n, const LoadingTable& loadings);
double depth_filter_min_r(int n, const LoadingTable& loadings, const CharacterTable& table);

// r(((k^4), (2^(2k)), (2^(2k)))) for n = 4k, k >= 2.
Threshold conjectured_r_star(int n, const LoadingTable& loadings);

// min over lambda with g(lambda, lambda, lambda) = 0 of 3 b_lambda, for
// n = 3k, k >= 2, with the lexicographically smallest lambda among ties.
Threshold conjectured_b_star(int n, const CharacterTable& table, const LoadingTable& loadings);

}  // namespace kronload
