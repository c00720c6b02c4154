#include "kronload/loadings.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kronload/error.hpp"

namespace kronload {

namespace {

void require_dim(const PartitionSet& order, std::size_t x, std::size_t y) {
  if (x != order.size() || y != order.size()) {
    throw DomainError("vector dimension " + std::to_string(x) + " does not match p(" + std::to_string(order.n()) +
                      ") = " + std::to_string(order.size()));
  }
}

}  // namespace

void similitude_matvec(const PartitionSet& order, std::span<const double> x, std::span<double> y) {
  require_dim(order, x.size(), y.size());
  const auto n = static_cast<std::size_t>(order.n());
  std::vector<double> s(n, 0.0);  // s = P^T x
  for (std::size_t r = 0; r < order.size(); ++r) {
    const auto& parts = order[r].parts();
    for (std::size_t j = 0; j < parts.size(); ++j) s[j] += parts[j] * x[r];
  }
  for (std::size_t r = 0; r < order.size(); ++r) {
    const auto& parts = order[r].parts();
    double acc = 0.0;
    for (std::size_t j = 0; j < parts.size(); ++j) acc += parts[j] * s[j];
    y[r] = acc;
  }
}

std::vector<double> similitude_matvec(const PartitionSet& order, std::span<const double> x) {
  std::vector<double> y(x.size());
  similitude_matvec(order, x, y);
  return y;
}

void difference_matvec(const PartitionSet& order, std::span<const double> x, std::span<double> y) {
  require_dim(order, x.size(), y.size());
  const int n = order.n();
  const auto w = static_cast<std::size_t>(n) + 1;
  // table[j * w + u] = sum_mu |u - mu_j| x_mu for coordinate j.
  std::vector<double> table(static_cast<std::size_t>(n) * w, 0.0);
  std::vector<double> mass(w);
  for (int j = 0; j < n; ++j) {
    std::fill(mass.begin(), mass.end(), 0.0);
    for (std::size_t r = 0; r < order.size(); ++r) mass[static_cast<std::size_t>(order[r][static_cast<std::size_t>(j)])] += x[r];
    double* row = table.data() + static_cast<std::size_t>(j) * w;
    // Left sweep: sum_{v < u} (u - v) mass[v]; right sweep: sum_{v > u} (v - u) mass[v].
    double below = 0.0, acc = 0.0;
    for (std::size_t u = 0; u < w; ++u) {
      acc += below;
      row[u] = acc;
      below += mass[u];
    }
    double above = 0.0;
    acc = 0.0;
    for (std::size_t u = w; u-- > 0;) {
      acc += above;
      row[u] += acc;
      above += mass[u];
    }
  }
  // tail[j] = sum_{j' >= j} table[j'][0], the contribution of zero padding.
  std::vector<double> tail(static_cast<std::size_t>(n) + 1, 0.0);
  for (int j = n; j-- > 0;) tail[static_cast<std::size_t>(j)] = tail[static_cast<std::size_t>(j) + 1] + table[static_cast<std::size_t>(j) * w];
  for (std::size_t r = 0; r < order.size(); ++r) {
    const auto& parts = order[r].parts();
    double acc = 0.0;
    for (std::size_t j = 0; j < parts.size(); ++j) acc += table[j * w + static_cast<std::size_t>(parts[j])];
    y[r] = acc + tail[parts.size()];
  }
}

std::vector<double> difference_matvec(const PartitionSet& order, std::span<const double> x) {
  std::vector<double> y(x.size());
  difference_matvec(order, x, y);
  return y;
}

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

}  // namespace

PowerResult power_iteration(const MatVec& matvec, std::size_t dim, const IterationMode& mode, bool keep_trace) {
  if (dim == 0) throw DomainError("power iteration needs a positive dimension");
  if (mode.kind == IterationMode::Kind::fixed && mode.steps < 1) {
    throw DomainError("fixed iteration count must be positive, got " + std::to_string(mode.steps));
  }
  if (mode.kind == IterationMode::Kind::converge && (!(mode.tol > 0.0) || mode.max_iters < 1)) {
    throw DomainError("convergence mode needs tol > 0 and max_iters >= 1");
  }
  PowerResult out;
  std::vector<double> x(dim, 0.0), y(dim);
  x[0] = 1.0;
  double prev_rq = 0.0;
  const int limit = mode.kind == IterationMode::Kind::fixed ? mode.steps : mode.max_iters;
  bool converged = false;
  for (int it = 1; it <= limit; ++it) {
    matvec(x, y);
    const double rq = dot(x, y);
    if ((prev_rq > 0.0 && rq < 0.0) || (prev_rq < 0.0 && rq > 0.0)) {
      throw DomainError("power iteration oscillates: Rayleigh quotient changed sign at step " + std::to_string(it));
    }
    if (rq != 0.0) prev_rq = rq;
    const double norm = std::sqrt(dot(y, y));
    if (!(norm > 0.0) || !std::isfinite(norm)) {
      throw DomainError("power iteration reached a zero or non-finite iterate at step " + std::to_string(it));
    }
    double step = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      const double next = y[i] / norm;
      step = std::max(step, std::abs(next - x[i]));
      x[i] = next;
    }
    out.iterations = it;
    if (keep_trace) out.trace.push_back(x);
    if (mode.kind == IterationMode::Kind::converge && step < mode.tol) {
      converged = true;
      break;
    }
  }
  if (mode.kind == IterationMode::Kind::converge && !converged) {
    throw DomainError("power iteration did not converge to " + std::to_string(mode.tol) + " within " +
                      std::to_string(mode.max_iters) + " steps");
  }
  matvec(x, y);
  out.eigenvalue = dot(x, y);
  for (std::size_t i = 0; i < dim; ++i) out.residual = std::max(out.residual, std::abs(y[i] - out.eigenvalue * x[i]));
  out.vector = std::move(x);
  return out;
}

std::vector<double> normalize_loadings(std::span<const double> x, const char* what) {
  const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
  const double spread = *hi - *lo;
  if (!(spread >= 1e-12)) {
    throw DomainError(std::string("degenerate ") + what + ": eigenvector spread " + std::to_string(spread) +
                      " is below 1e-12, so min-max normalization is undefined");
  }
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = 100.0 * (x[i] - *lo) / spread;
  out[static_cast<std::size_t>(lo - x.begin())] = 0.0;
  out[static_cast<std::size_t>(hi - x.begin())] = 100.0;
  return out;
}

LoadingTable compute_loadings(int n, const IterationMode& mode) {
  if (n < 2) throw DomainError("loadings need n >= 2, got " + std::to_string(n));
  if (n == 2) {
    throw DomainError("b-loadings are undefined for n=2: the Perron vector of Z_2 is constant (1,1)/sqrt(2), "
                      "so min-max normalization has zero spread");
  }
  LoadingTable t;
  t.n = n;
  t.order = shared_partitions(n);
  const PartitionSet& order = *t.order;
  auto y = power_iteration([&](std::span<const double> x, std::span<double> out) { similitude_matvec(order, x, out); },
                           order.size(), mode);
  auto z = power_iteration([&](std::span<const double> x, std::span<double> out) { difference_matvec(order, x, out); },
                           order.size(), mode);
  t.r = normalize_loadings(y.vector, "r-loadings");
  t.b = normalize_loadings(z.vector, "b-loadings");
  t.v = std::move(y.vector);
  t.w = std::move(z.vector);
  t.iterations = {y.iterations, z.iterations};
  t.residuals = {y.residual, z.residual};
  t.eigenvalues = {y.eigenvalue, z.eigenvalue};
  return t;
}

TripleLoading triple_loading(const Triple& t, const LoadingTable& table) {
  if (t.n() != table.n) {
    throw DomainError("triple has size " + std::to_string(t.n()) + " but loadings are for n=" +
                      std::to_string(table.n));
  }
  const auto& order = *table.order;
  return triple_loading(order.index_of(t.lambda), order.index_of(t.mu), order.index_of(t.nu), table);
}

}  // namespace kronload
