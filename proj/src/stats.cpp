#include "kronload/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "kronload/error.hpp"

namespace kronload {

void Moments::add(double x, double weight) {
  if (weight <= 0.0) return;
  ++entries_;
  weight_ += weight;
  const double delta = x - mean_;
  mean_ += delta * (weight / weight_);
  m2_ += weight * delta * (x - mean_);
}

void Moments::merge(const Moments& other) {
  if (other.weight_ == 0.0) return;
  if (weight_ == 0.0) {
    *this = other;
    return;
  }
  const double total = weight_ + other.weight_;
  const double delta = other.mean_ - mean_;
  mean_ += delta * (other.weight_ / total);
  m2_ += other.m2_ + delta * delta * (weight_ * other.weight_ / total);
  weight_ = total;
  entries_ += other.entries_;
}

double Moments::mean() const {
  if (empty()) throw DomainError("moments of an empty sample");
  return mean_;
}

double Moments::variance() const {
  if (empty()) throw DomainError("moments of an empty sample");
  return std::max(0.0, m2_ / weight_);
}

MomentSummary summarize(const Moments& m) { return {m.mean(), m.variance(), m.weight()}; }

MomentSummary moments(std::span<const double> samples) {
  Moments m;
  for (double x : samples) m.add(x);
  return summarize(m);
}

MomentSummary moments(std::span<const double> samples, std::span<const double> weights) {
  if (samples.size() != weights.size()) throw DomainError("samples and weights differ in length");
  Moments m;
  for (std::size_t i = 0; i < samples.size(); ++i) m.add(samples[i], weights[i]);
  return summarize(m);
}

MomentSummary triple_moments(const MomentSummary& single) {
  return {3.0 * single.mean, 3.0 * single.variance, single.count * single.count * single.count};
}

Histogram Histogram::uniform(double lo, double hi, double width) {
  if (!(width > 0.0) || !std::isfinite(width)) throw DomainError("histogram bin width must be positive");
  if (!(hi >= lo)) throw DomainError("histogram range is empty");
  const auto bins = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil((hi - lo) / width - 1e-9)));
  Histogram h;
  h.edges.resize(bins + 1);
  for (std::size_t i = 0; i <= bins; ++i) h.edges[i] = lo + static_cast<double>(i) * width;
  h.edges.back() = std::max(h.edges.back(), hi);
  h.counts.assign(bins, 0);
  return h;
}

std::size_t Histogram::bin_of(double x) const {
  const std::size_t bins = counts.size();
  if (x <= edges.front()) return 0;
  if (x >= edges.back()) return bins - 1;
  // upper_bound gives the first edge > x; the bin is the one before it.
  const auto it = std::upper_bound(edges.begin(), edges.end(), x);
  return std::min(bins - 1, static_cast<std::size_t>(it - edges.begin()) - 1);
}

std::uint64_t Histogram::total() const {
  return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

void Histogram::merge(const Histogram& other) {
  if (other.edges != edges) throw DomainError("cannot merge histograms with different edges");
  for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += other.counts[i];
}

namespace {

// Weighted quantile by the lower empirical inverse CDF.
double quantile(const std::vector<std::pair<double, double>>& sorted, double total, double q) {
  const double target = q * total;
  double seen = 0.0;
  for (const auto& [value, weight] : sorted) {
    seen += weight;
    if (seen >= target) return value;
  }
  return sorted.back().first;
}

Histogram edges_for(std::span<const double> values, std::span<const double> weights, const Binning& binning) {
  if (values.empty()) throw DomainError("histogram of an empty sample");
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  switch (binning.kind) {
    case Binning::Kind::width:
      if (!(binning.value > 0.0)) throw DomainError("histogram bin width must be positive");
      if (hi == lo) return Histogram::uniform(lo, lo + binning.value, binning.value);
      return Histogram::uniform(lo, hi, binning.value);
    case Binning::Kind::count: {
      if (!(binning.value >= 1.0)) throw DomainError("histogram bin count must be positive");
      if (hi == lo) return Histogram::uniform(lo - 0.5, lo + 0.5, 1.0);
      const double width = (hi - lo) / binning.value;
      Histogram h = Histogram::uniform(lo, hi, width);
      return h;
    }
    case Binning::Kind::automatic:
      break;
  }
  if (hi == lo) return Histogram::uniform(lo - 0.5, lo + 0.5, 1.0);
  std::vector<std::pair<double, double>> sorted(values.size());
  double total = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    sorted[i] = {values[i], weights.empty() ? 1.0 : weights[i]};
    total += sorted[i].second;
  }
  std::sort(sorted.begin(), sorted.end());
  const double iqr = quantile(sorted, total, 0.75) - quantile(sorted, total, 0.25);
  const double fd = 2.0 * iqr / std::cbrt(total);
  const double width = std::clamp(fd, 1.0, 10.0);
  const auto bins = std::clamp<std::size_t>(static_cast<std::size_t>(std::ceil((hi - lo) / width)), 20, 200);
  Histogram h;
  h.edges.resize(bins + 1);
  for (std::size_t i = 0; i <= bins; ++i) h.edges[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(bins);
  h.edges.back() = hi;
  h.counts.assign(bins, 0);
  return h;
}

}  // namespace

Histogram histogram(std::span<const double> values, const Binning& binning) {
  return histogram(values, {}, binning);
}

Histogram histogram(std::span<const double> values, std::span<const double> weights, const Binning& binning) {
  if (!weights.empty() && weights.size() != values.size()) throw DomainError("values and weights differ in length");
  Histogram h = edges_for(values, weights, binning);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double w = weights.empty() ? 1.0 : weights[i];
    if (w < 0.0 || w != std::floor(w)) throw DomainError("histogram weights must be nonnegative integers");
    h.add(values[i], static_cast<std::uint64_t>(w));
  }
  return h;
}

bool is_unimodal(std::span<const std::uint64_t> counts) {
  std::size_t i = 1;
  while (i < counts.size() && counts[i] >= counts[i - 1]) ++i;
  while (i < counts.size() && counts[i] <= counts[i - 1]) ++i;
  return i >= counts.size();
}

double FitParams::density(double x) const {
  if (family == Family::normal) {
    if (degenerate) return 0.0;
    const double z = (x - p1) / p2;
    return std::exp(-0.5 * z * z) / (p2 * std::sqrt(2.0 * std::numbers::pi));
  }
  if (x <= 0.0) return 0.0;
  return std::exp((p1 - 1.0) * std::log(x) - x / p2 - std::lgamma(p1) - p1 * std::log(p2));
}

FitParams fit_normal(double mean, double variance) {
  if (variance < 0.0 || !std::isfinite(variance)) throw DomainError("normal fit needs a nonnegative variance");
  FitParams f;
  f.family = FitParams::Family::normal;
  f.p1 = mean;
  f.p2 = std::sqrt(variance);
  f.sample_mean = mean;
  f.sample_variance = variance;
  f.degenerate = variance == 0.0;
  return f;
}

FitParams fit_gamma(double mean, double variance) {
  if (!(mean > 0.0) || !(variance > 0.0)) throw DomainError("gamma fit needs positive mean and variance");
  FitParams f;
  f.family = FitParams::Family::gamma;
  f.p1 = mean * mean / variance;
  f.p2 = variance / mean;
  f.sample_mean = mean;
  f.sample_variance = variance;
  return f;
}

}  // namespace kronload
