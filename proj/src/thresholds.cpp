#include "kronload/thresholds.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "kronload/error.hpp"
#include "kronload/parallel.hpp"

namespace kronload {

std::string to_string(Provenance p) { return p == Provenance::exhaustive ? "exhaustive" : "conjectured"; }

std::string to_string(Verdict::Kind k) {
  switch (k) {
    case Verdict::Kind::provably_zero:
      return "provably_zero";
    case Verdict::Kind::provably_nonzero:
      return "provably_nonzero";
    case Verdict::Kind::unknown:
      break;
  }
  return "unknown";
}

namespace {

struct Candidate {
  double value;
  std::uint32_t i, j, k;
};

// Running minimum plus every candidate within tie_tolerance of it.
struct MinTracker {
  double best = std::numeric_limits<double>::infinity();
  std::vector<Candidate> ties;

  void offer(double v, std::size_t i, std::size_t j, std::size_t k) {
    if (v > best + tie_tolerance) return;
    if (v < best) {
      best = v;
      std::erase_if(ties, [&](const Candidate& c) { return c.value > best + tie_tolerance; });
    }
    ties.push_back({v, static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), static_cast<std::uint32_t>(k)});
  }
};

// Merges in the given order and resolves ties: the lexicographically smallest
// sorted triple has the largest indices, compared lambda first.
std::optional<Threshold> resolve(const std::vector<const MinTracker*>& parts, const PartitionSet& order) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto* p : parts) best = std::min(best, p->best);
  if (!std::isfinite(best)) return std::nullopt;
  const Candidate* pick = nullptr;
  for (const auto* p : parts) {
    for (const auto& c : p->ties) {
      if (c.value > best + tie_tolerance) continue;
      if (!pick || std::tie(c.i, c.j, c.k) > std::tie(pick->i, pick->j, pick->k)) pick = &c;
    }
  }
  return Threshold{best, Triple(order[pick->i], order[pick->j], order[pick->k])};
}

ClassHistograms make_histograms(double width) {
  const Histogram grid = Histogram::uniform(0.0, 300.0, width);
  return {grid, grid, grid};
}

void merge_into(ClassHistograms& a, const ClassHistograms& b) {
  a.nonzero.merge(b.nonzero);
  a.zero.merge(b.zero);
  a.depth_violating.merge(b.depth_violating);
}

void merge_into(ClassMoments& a, const ClassMoments& b) {
  a.all.merge(b.all);
  a.nonzero.merge(b.nonzero);
  a.zero.merge(b.zero);
}

struct ChunkResult {
  MinTracker r_min;  // over nonzero
  MinTracker b_min;  // over zero
  std::uint64_t nonzero = 0, zero = 0, depth_violating = 0, depth_violating_nonzero = 0, sorted = 0, orbit = 0;
  double min_r_depth_violating = std::numeric_limits<double>::infinity();
  ClassHistograms r_hist, b_hist;
  ClassMoments r_mom, b_mom;
  ScanSamples samples;
};

void require_inputs(int n, const CharacterTable& table, const LoadingTable& loadings) {
  if (table.n() != n || loadings.n != n) {
    throw DomainError("scan inputs disagree: n=" + std::to_string(n) + ", table n=" + std::to_string(table.n()) +
                      ", loadings n=" + std::to_string(loadings.n));
  }
}

std::vector<int> depths_of(const PartitionSet& order) {
  std::vector<int> d(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) d[i] = depth(order[i]);
  return d;
}

}  // namespace

ScanResult scan(int n, const CharacterTable& table, const LoadingTable& loadings, const ScanOptions& options) {
  require_inputs(n, table, loadings);
  if (n > default_scan_limit && !options.allow_long) {
    throw ResourceError("exhaustive scan for n=" + std::to_string(n) + " is above the default limit of n=" +
                        std::to_string(default_scan_limit) + "; pass --long to run it");
  }
  const PartitionSet& order = table.order();
  const std::size_t p = order.size();
  const std::vector<int> d = depths_of(order);
  const auto& r = loadings.r;
  const auto& b = loadings.b;
  const detail::KroneckerKernel kernel(table);

  std::vector<ChunkResult> chunks(p);
  parallel_for(p, options.threads, [&](std::size_t i) {
    ChunkResult& c = chunks[i];
    c.r_hist = make_histograms(options.histogram_width);
    c.b_hist = make_histograms(options.histogram_width);
    detail::KroneckerKernel::PairWeights w;
    for (std::size_t j = i; j < p; ++j) {
      kernel.weights(i, j, w);
      const bool fast = w.mode != detail::KroneckerKernel::PairWeights::Mode::big;
      for (std::size_t k = j; k < p; ++k) {
        const bool nonzero = fast ? !kernel.fast_is_zero(kernel.scaled_fast(w, k))
                                  : kernel.unscale(kernel.scaled_big(w, k)) != 0;
        const std::uint64_t orbit = orbit_size(i, j, k);
        const double tr = sum3(r[i], r[j], r[k]);
        const double tb = sum3(b[i], b[j], b[k]);
        const bool admissible = depth_admissible(d[i], d[j], d[k]);
        ++c.sorted;
        c.orbit += orbit;
        const auto weight = static_cast<double>(orbit);
        c.r_mom.all.add(tr, weight);
        c.b_mom.all.add(tb, weight);
        if (nonzero) {
          c.nonzero += orbit;
          c.r_min.offer(tr, i, j, k);
          c.r_hist.nonzero.add(tr, orbit);
          c.b_hist.nonzero.add(tb, orbit);
          c.r_mom.nonzero.add(tr, weight);
          c.b_mom.nonzero.add(tb, weight);
        } else {
          c.zero += orbit;
          c.b_min.offer(tb, i, j, k);
          c.r_hist.zero.add(tr, orbit);
          c.b_hist.zero.add(tb, orbit);
          c.r_mom.zero.add(tr, weight);
          c.b_mom.zero.add(tb, weight);
        }
        if (!admissible) {
          c.depth_violating += orbit;
          if (nonzero) c.depth_violating_nonzero += orbit;
          c.min_r_depth_violating = std::min(c.min_r_depth_violating, tr);
          c.r_hist.depth_violating.add(tr, orbit);
          c.b_hist.depth_violating.add(tb, orbit);
        }
        if (options.collect_samples) {
          c.samples.r.push_back(tr);
          c.samples.b.push_back(tb);
          c.samples.weight.push_back(weight);
          c.samples.nonzero.push_back(nonzero ? 1 : 0);
        }
      }
    }
  });

  ScanResult out;
  out.thresholds.n = n;
  out.thresholds.provenance = Provenance::exhaustive;
  out.r_hist = make_histograms(options.histogram_width);
  out.b_hist = make_histograms(options.histogram_width);
  if (options.collect_samples) out.samples.emplace();
  std::vector<const MinTracker*> r_parts, b_parts;
  for (const auto& c : chunks) {
    r_parts.push_back(&c.r_min);
    b_parts.push_back(&c.b_min);
    out.nonzero_count += c.nonzero;
    out.zero_count += c.zero;
    out.depth_violating_count += c.depth_violating;
    out.depth_violating_nonzero += c.depth_violating_nonzero;
    out.sorted_triples += c.sorted;
    out.orbit_total += c.orbit;
    out.min_r_depth_violating = std::min(out.min_r_depth_violating, c.min_r_depth_violating);
    merge_into(out.r_hist, c.r_hist);
    merge_into(out.b_hist, c.b_hist);
    merge_into(out.r_moments, c.r_mom);
    merge_into(out.b_moments, c.b_mom);
    if (out.samples) {
      auto append = [](auto& dst, const auto& src) { dst.insert(dst.end(), src.begin(), src.end()); };
      append(out.samples->r, c.samples.r);
      append(out.samples->b, c.samples.b);
      append(out.samples->weight, c.samples.weight);
      append(out.samples->nonzero, c.samples.nonzero);
    }
  }
  out.total_triples = static_cast<std::uint64_t>(p) * p * p;
  if (out.orbit_total != out.total_triples) {
    throw InvariantError("orbit sizes sum to " + std::to_string(out.orbit_total) + ", expected p(n)^3 = " +
                         std::to_string(out.total_triples));
  }
  out.thresholds.r_star = resolve(r_parts, order);
  out.thresholds.b_star = resolve(b_parts, order);

  // Counting below the thresholds needs only loadings.
  const double r_star = out.thresholds.r_star ? out.thresholds.r_star->value : -1.0;
  const double b_star = out.thresholds.b_star ? out.thresholds.b_star->value : -1.0;
  std::vector<double> rr = r, bb = b;
  if (options.count_decimals) {
    const double scale = std::pow(10.0, *options.count_decimals);
    for (auto& x : rr) x = std::round(x * scale) / scale;
    for (auto& x : bb) x = std::round(x * scale) / scale;
  }
  std::vector<std::pair<std::uint64_t, std::uint64_t>> below(p, {0, 0});
  parallel_for(p, options.threads, [&](std::size_t i) {
    auto& [rc, bc] = below[i];
    for (std::size_t j = i; j < p; ++j) {
      for (std::size_t k = j; k < p; ++k) {
        const std::uint64_t orbit = orbit_size(i, j, k);
        if (sum3(rr[i], rr[j], rr[k]) < r_star) rc += orbit;
        if (sum3(bb[i], bb[j], bb[k]) < b_star) bc += orbit;
      }
    }
  });
  for (const auto& [rc, bc] : below) {
    out.r_below_count += rc;
    out.b_below_count += bc;
  }
  return out;
}

Verdict classify(const Triple& t, const Thresholds& th, const LoadingTable& loadings) {
  if (t.n() != th.n || t.n() != loadings.n) {
    throw DomainError("triple has size " + std::to_string(t.n()) + " but thresholds are for n=" +
                      std::to_string(th.n) + " and loadings for n=" + std::to_string(loadings.n));
  }
  const TripleLoading tl = triple_loading(t, loadings);
  Verdict v;
  v.r = tl.r;
  v.b = tl.b;
  v.advisory = th.provenance == Provenance::conjectured;
  const bool zero = th.r_star && tl.r < th.r_star->value;
  const bool nonzero = th.b_star && tl.b < th.b_star->value;
  if (zero && nonzero) {
    throw DomainError("inconsistent thresholds for n=" + std::to_string(th.n) + ": r(t) < r_star and b(t) < b_star both hold");
  }
  if (zero) {
    v.kind = Verdict::Kind::provably_zero;
    v.rule = "r<r_star";
    v.margin = th.r_star->value - tl.r;
  } else if (nonzero) {
    v.kind = Verdict::Kind::provably_nonzero;
    v.rule = "b<b_star";
    v.margin = th.b_star->value - tl.b;
  } else {
    v.kind = Verdict::Kind::unknown;
    v.rule = "none";
  }
  return v;
}

double depth_filter_min_r(int n, const LoadingTable& loadings) {
  if (loadings.n != n) throw DomainError("loadings are for n=" + std::to_string(loadings.n) + ", expected " + std::to_string(n));
  const PartitionSet& order = *loadings.order;
  const std::vector<int> d = depths_of(order);
  const std::size_t p = order.size();
  const auto& r = loadings.r;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = i; j < p; ++j) {
      for (std::size_t k = j; k < p; ++k) {
        if (!depth_admissible(d[i], d[j], d[k])) best = std::min(best, sum3(r[i], r[j], r[k]));
      }
    }
  }
  return best;
}

double depth_filter_min_r(int n, const LoadingTable& loadings, const CharacterTable& table) {
  if (table.n() != n) throw DomainError("character table is for n=" + std::to_string(table.n()) + ", expected " + std::to_string(n));
  return depth_filter_min_r(n, loadings);
}

Threshold conjectured_r_star(int n, const LoadingTable& loadings) {
  if (n % 4 != 0 || n < 8) throw DomainError("conjectured r_star needs n = 4k with k >= 2, got n=" + std::to_string(n));
  if (loadings.n != n) throw DomainError("loadings are for n=" + std::to_string(loadings.n) + ", expected " + std::to_string(n));
  const int k = n / 4;
  const Triple t(Partition(std::vector<int>(4, k)), Partition(std::vector<int>(static_cast<std::size_t>(2 * k), 2)),
                 Partition(std::vector<int>(static_cast<std::size_t>(2 * k), 2)));
  return {triple_loading(t, loadings).r, t.sorted()};
}

Threshold conjectured_b_star(int n, const CharacterTable& table, const LoadingTable& loadings) {
  if (n % 3 != 0 || n < 6) throw DomainError("conjectured b_star needs n = 3k with k >= 2, got n=" + std::to_string(n));
  require_inputs(n, table, loadings);
  const std::size_t p = table.size();
  std::vector<std::size_t> by_b(p);
  for (std::size_t i = 0; i < p; ++i) by_b[i] = i;
  std::stable_sort(by_b.begin(), by_b.end(), [&](std::size_t x, std::size_t y) { return loadings.b[x] < loadings.b[y]; });

  const detail::KroneckerKernel kernel(table);
  detail::KroneckerKernel::PairWeights w;
  std::optional<double> best;
  std::size_t pick = 0;
  for (std::size_t i : by_b) {
    const double value = sum3(loadings.b[i], loadings.b[i], loadings.b[i]);
    if (best && value > *best + tie_tolerance) break;
    kernel.weights(i, i, w);
    if (kernel.unscale(kernel.scaled_big(w, i)) != 0) continue;
    if (!best) {
      best = value;
      pick = i;
    } else if (i > pick) {
      pick = i;  // larger index = lexicographically smaller
    }
  }
  if (!best) throw DomainError("no lambda with g(lambda, lambda, lambda) = 0 for n=" + std::to_string(n));
  const Partition& lambda = table.order()[pick];
  return {*best, Triple(lambda, lambda, lambda)};
}

}  // namespace kronload
