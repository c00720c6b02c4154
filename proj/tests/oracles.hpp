#pragma once

// Independent reference computations used only by the tests. None of them
// share code paths with the library routines they check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include <gmpxx.h>

#include "kronload/characters.hpp"
#include "kronload/partitions.hpp"

namespace oracle {

// p(n) by the coin-change recurrence over part sizes.
inline std::uint64_t partition_count(int n) {
  std::vector<std::uint64_t> ways(static_cast<std::size_t>(n) + 1, 0);
  ways[0] = 1;
  for (int part = 1; part <= n; ++part) {
    for (int s = part; s <= n; ++s) ways[static_cast<std::size_t>(s)] += ways[static_cast<std::size_t>(s - part)];
  }
  return ways[static_cast<std::size_t>(n)];
}

// Partitions of n in descending lexicographic order by recursion on the
// first part.
inline void partitions_rec(int rest, int cap, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (rest == 0) {
    out.push_back(cur);
    return;
  }
  for (int a = std::min(rest, cap); a >= 1; --a) {
    cur.push_back(a);
    partitions_rec(rest - a, a, cur, out);
    cur.pop_back();
  }
}

inline std::vector<std::vector<int>> partitions(int n) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  partitions_rec(n, n, cur, out);
  return out;
}

inline std::vector<int> cycle_type(const std::vector<int>& perm) {
  std::vector<char> seen(perm.size(), 0);
  std::vector<int> cycles;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    if (seen[i]) continue;
    int len = 0;
    for (std::size_t j = i; !seen[j]; j = static_cast<std::size_t>(perm[j])) {
      seen[j] = 1;
      ++len;
    }
    cycles.push_back(len);
  }
  std::sort(cycles.rbegin(), cycles.rend());
  return cycles;
}

// Character table of S_3 from the six group elements: the trivial character,
// the standard character (fixed points of the permutation matrix minus 1),
// and the sign character. Rows (3), (2,1), (1^3); columns by cycle type in
// the same order.
inline std::vector<std::vector<long>> s3_table() {
  const std::vector<std::vector<int>> order{{3}, {2, 1}, {1, 1, 1}};
  std::vector<std::vector<long>> table(3, std::vector<long>(3, 0));
  std::vector<int> perm{0, 1, 2};
  do {
    const auto type = cycle_type(perm);
    const auto col = static_cast<std::size_t>(std::find(order.begin(), order.end(), type) - order.begin());
    long fixed_points = 0;
    for (int i = 0; i < 3; ++i) fixed_points += perm[static_cast<std::size_t>(i)] == i ? 1 : 0;
    long inversions = 0;
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j) inversions += perm[static_cast<std::size_t>(i)] > perm[static_cast<std::size_t>(j)];
    table[0][col] = 1;
    table[1][col] = fixed_points - 1;
    table[2][col] = inversions % 2 == 0 ? 1 : -1;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return table;
}

// g(lambda, mu, nu) as the exact rational sum_rho chi chi chi / z_rho.
inline mpq_class kronecker_rational(const kronload::CharacterTable& t, std::size_t i, std::size_t j, std::size_t k) {
  mpq_class acc = 0;
  for (std::size_t c = 0; c < t.size(); ++c) {
    mpq_class term(t.value(i, c) * t.value(j, c) * t.value(k, c), t.classes()[c].centralizer_order);
    term.canonicalize();
    acc += term;
  }
  return acc;
}

// Dense Y_n and Z_n from zero-padded vectors.
inline std::vector<std::vector<double>> dense_y(int n) {
  const auto ps = partitions(n);
  std::vector<std::vector<double>> m(ps.size(), std::vector<double>(ps.size(), 0.0));
  for (std::size_t a = 0; a < ps.size(); ++a) {
    for (std::size_t b = 0; b < ps.size(); ++b) {
      double dot = 0;
      for (std::size_t i = 0; i < std::min(ps[a].size(), ps[b].size()); ++i) dot += ps[a][i] * ps[b][i];
      m[a][b] = dot;
    }
  }
  return m;
}

inline std::vector<std::vector<double>> dense_z(int n) {
  const auto ps = partitions(n);
  std::vector<std::vector<double>> m(ps.size(), std::vector<double>(ps.size(), 0.0));
  for (std::size_t a = 0; a < ps.size(); ++a) {
    for (std::size_t b = 0; b < ps.size(); ++b) {
      double dist = 0;
      for (std::size_t i = 0; i < static_cast<std::size_t>(n); ++i) {
        const int x = i < ps[a].size() ? ps[a][i] : 0;
        const int y = i < ps[b].size() ? ps[b][i] : 0;
        dist += std::abs(x - y);
      }
      m[a][b] = dist;
    }
  }
  return m;
}

inline std::vector<double> multiply(const std::vector<std::vector<double>>& m, const std::vector<double>& x) {
  std::vector<double> y(m.size(), 0.0);
  for (std::size_t a = 0; a < m.size(); ++a)
    for (std::size_t b = 0; b < m.size(); ++b) y[a] += m[a][b] * x[b];
  return y;
}

// Power iteration on a dense matrix from e_1 until the step is below tol.
inline std::vector<double> dense_perron(const std::vector<std::vector<double>>& m, double tol = 1e-14,
                                        int max_iters = 100000) {
  std::vector<double> x(m.size(), 0.0);
  x[0] = 1.0;
  for (int it = 0; it < max_iters; ++it) {
    auto y = multiply(m, x);
    double norm = 0;
    for (double v : y) norm += v * v;
    norm = std::sqrt(norm);
    double step = 0;
    for (std::size_t i = 0; i < y.size(); ++i) {
      y[i] /= norm;
      step = std::max(step, std::abs(y[i] - x[i]));
    }
    x = y;
    if (step < tol) break;
  }
  return x;
}

}  // namespace oracle
