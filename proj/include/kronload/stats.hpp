#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace kronload {

// Weighted streaming mean and population variance (West/Welford update,
// Chan merge). Weights are nonnegative; the summary uses total weight as the
// sample count.
class Moments {
 public:
  void add(double x, double weight = 1.0);
  void merge(const Moments& other);

  double weight() const noexcept { return weight_; }
  std::uint64_t entries() const noexcept { return entries_; }
  bool empty() const noexcept { return weight_ == 0.0; }
  // Throw DomainError when empty.
  double mean() const;
  double variance() const;

 private:
  double weight_ = 0.0;
  double mean_ = 0.0;
  double m2_ = 0.0;
  std::uint64_t entries_ = 0;
};

struct MomentSummary {
  double mean = 0.0;
  double variance = 0.0;
  double count = 0.0;
};

MomentSummary moments(std::span<const double> samples);
MomentSummary moments(std::span<const double> samples, std::span<const double> weights);
MomentSummary summarize(const Moments& m);

// Moments of x_1 + x_2 + x_3 with the x_i drawn independently and uniformly
// from one population: mean and variance scale by 3.
MomentSummary triple_moments(const MomentSummary& single);

struct Binning {
  enum class Kind { automatic, count, width };
  Kind kind = Kind::automatic;
  double value = 0.0;  // bin count or bin width

  static Binning automatic() { return {}; }
  static Binning count(std::size_t k) { return {Kind::count, static_cast<double>(k)}; }
  static Binning width(double w) { return {Kind::width, w}; }
};

// Bins [e_i, e_{i+1}) with the last bin closed on the right. Values outside
// [front, back] are clamped into the end bins.
struct Histogram {
  std::vector<double> edges;
  std::vector<std::uint64_t> counts;

  // Equal-width grid over [lo, hi] with ceil((hi - lo) / width) bins.
  static Histogram uniform(double lo, double hi, double width);

  std::size_t bins() const noexcept { return counts.size(); }
  std::size_t bin_of(double x) const;
  void add(double x, std::uint64_t weight = 1) { counts[bin_of(x)] += weight; }
  std::uint64_t total() const;
  void merge(const Histogram& other);
};

// Automatic binning: Freedman-Diaconis width 2 IQR / N^(1/3), clamped to
// [1, 10], then the bin count clamped to [20, 200] with the width rescaled
// to cover [min, max] exactly. Throws DomainError on empty input or a
// nonpositive width/count.
Histogram histogram(std::span<const double> values, const Binning& binning = {});
Histogram histogram(std::span<const double> values, std::span<const double> weights, const Binning& binning = {});

// True when the counts rise weakly to a single peak and then fall weakly.
bool is_unimodal(std::span<const std::uint64_t> counts);

struct FitParams {
  enum class Family { normal, gamma };
  Family family = Family::normal;
  double p1 = 0.0;  // normal: mean; gamma: shape
  double p2 = 0.0;  // normal: stddev; gamma: scale
  double sample_mean = 0.0;
  double sample_variance = 0.0;
  bool degenerate = false;  // normal with zero stddev

  double density(double x) const;
  std::string family_name() const { return family == Family::normal ? "normal" : "gamma"; }
};

FitParams fit_normal(double mean, double variance);
// Method of moments: shape = mean^2 / variance, scale = variance / mean.
FitParams fit_gamma(double mean, double variance);

}  // namespace kronload
