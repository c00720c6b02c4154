#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "kronload/kronecker.hpp"
#include "kronload/partitions.hpp"

namespace kronload {

// y = Y_n x with Y_n = P_n P_n^T, in O(p(n) n) without forming Y_n.
void similitude_matvec(const PartitionSet& order, std::span<const double> x, std::span<double> y);
std::vector<double> similitude_matvec(const PartitionSet& order, std::span<const double> x);

// y = Z_n x with z_{lambda,mu} = ||lambda - mu||_1. The L1 distance splits
// over coordinates, so each coordinate is handled by bucketing x on the
// coordinate value and prefix sums; O(p(n) n) overall.
void difference_matvec(const PartitionSet& order, std::span<const double> x, std::span<double> y);
std::vector<double> difference_matvec(const PartitionSet& order, std::span<const double> x);

struct IterationMode {
  enum class Kind { converge, fixed };
  Kind kind = Kind::converge;
  double tol = 1e-13;     // converge: stop when the L-inf step is below tol
  int max_iters = 10000;  // converge: error after this many steps
  int steps = 0;          // fixed: run exactly this many steps

  static IterationMode converge(double tol = 1e-13, int max_iters = 10000) {
    return {Kind::converge, tol, max_iters, 0};
  }
  static IterationMode fixed(int steps) { return {Kind::fixed, 0.0, 0, steps}; }

  bool is_default() const { return kind == Kind::converge && tol == 1e-13 && max_iters == 10000; }
  friend bool operator==(const IterationMode&, const IterationMode&) = default;
};

// y = M x for vectors of the operator's dimension.
using MatVec = std::function<void(std::span<const double>, std::span<double>)>;

struct PowerResult {
  std::vector<double> vector;  // unit L2
  int iterations = 0;
  double eigenvalue = 0.0;  // Rayleigh quotient of the final vector
  double residual = 0.0;    // ||M x - (x^T M x) x||_inf
  std::vector<std::vector<double>> trace;  // iterates x_1..x_k when requested
};

// Power iteration from e_1. Throws DomainError on non-convergence, on a zero
// iterate, and when the Rayleigh quotient changes sign between steps.
PowerResult power_iteration(const MatVec& matvec, std::size_t dim, const IterationMode& mode,
                            bool keep_trace = false);

struct LoadingTable {
  int n = 0;
  std::shared_ptr<const PartitionSet> order;
  std::vector<double> r;  // in [0, 100], min exactly 0 and max exactly 100
  std::vector<double> b;
  std::vector<double> v;  // Perron vector of Y_n
  std::vector<double> w;  // Perron vector of Z_n
  std::pair<int, int> iterations{0, 0};
  std::pair<double, double> residuals{0.0, 0.0};
  std::pair<double, double> eigenvalues{0.0, 0.0};
};

// Min-max normalization to [0, 100]; throws DomainError when the spread is
// below 1e-12.
std::vector<double> normalize_loadings(std::span<const double> x, const char* what);

// n >= 3; n = 2 is rejected because the Perron vector of Z_2 is constant.
LoadingTable compute_loadings(int n, const IterationMode& mode = {});

struct TripleLoading {
  double r = 0.0;
  double b = 0.0;
};

// Sum of three loadings added in ascending order, so every permutation of the
// arguments gives a bit-identical result.
inline double sum3(double a, double b, double c) {
  if (a > b) std::swap(a, b);
  if (b > c) std::swap(b, c);
  if (a > b) std::swap(a, b);
  return (a + b) + c;
}

TripleLoading triple_loading(const Triple& t, const LoadingTable& table);

inline TripleLoading triple_loading(std::size_t i, std::size_t j, std::size_t k, const LoadingTable& table) {
  return {sum3(table.r[i], table.r[j], table.r[k]), sum3(table.b[i], table.b[j], table.b[k])};
}

}  // namespace kronload
