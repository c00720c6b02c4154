#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "kronload/characters.hpp"
#include "kronload/exact.hpp"
#include "kronload/partitions.hpp"

namespace kronload {

/// (lambda, mu, nu), all partitions of the same n.
struct Triple {
  Partition lambda;
  Partition mu;
  Partition nu;

  Triple(Partition l, Partition m, Partition v);

  int n() const noexcept { return lambda.size(); }
  /// Same multiset reordered so that lambda >= mu >= nu lexicographically.
  Triple sorted() const;

  friend bool operator==(const Triple&, const Triple&) = default;
};

/// A Kronecker coefficient g_{lambda,mu}^nu; always nonnegative.
struct KroneckerValue {
  BigInt value;

  bool is_zero() const { return value == 0; }
  friend bool operator==(const KroneckerValue& a, const KroneckerValue& b) { return a.value == b.value; }
};

/// g(t) = (1/n!) sum_rho (n!/z_rho) chi_lambda chi_mu chi_nu, with exact
/// divisibility asserted.
KroneckerValue kron(const Triple& t, const CharacterTable& table);

/// Decomposition of S_lambda (x) S_mu: one (nu, g) entry per nu in table
/// order, zeros included.
std::vector<std::pair<Partition, KroneckerValue>> kron_row(const Partition& lambda, const Partition& mu,
                                                           const CharacterTable& table);

/// |d_lambda - d_mu| <= d_nu <= d_lambda + d_mu for the triple as given.
bool depth_admissible(const Triple& t);
bool depth_admissible(int d_lambda, int d_mu, int d_nu);

/// True iff all six orderings of t give the same coefficient.
bool check_symmetry(const Triple& t, const CharacterTable& table);

namespace detail {

/// Exact inner-product engine over one character table. For a pair of rows it
/// forms the class-weighted product vector w_rho = (n!/z_rho) chi_i chi_j once,
/// after which each third row costs a single integer dot product. Fixed-width
/// arithmetic is used only when a per-pair bound proves it cannot overflow;
/// otherwise it falls back to BigInt.
class KroneckerKernel {
 public:
  explicit KroneckerKernel(const CharacterTable& table);

  const CharacterTable& table() const noexcept { return *table_; }

  /// Per-thread scratch for one (i, j) pair.
  struct PairWeights {
    std::vector<std::int64_t> w64;
    std::vector<int128> w128;
    std::vector<BigInt> wbig;
    enum class Mode { i64, i128, big } mode = Mode::big;
  };

  void weights(std::size_t i, std::size_t j, PairWeights& out) const;

  /// n! * g(i, j, k) given the weights of (i, j). Exact.
  BigInt scaled_big(const PairWeights& w, std::size_t k) const;

  /// Fixed-width n! * g(i, j, k); requires w.mode != big.
  int128 scaled_fast(const PairWeights& w, std::size_t k) const {
    const std::int64_t* chi = table_->row64(k).data();
    const std::size_t p = table_->size();
    int128 acc = 0;
    if (w.mode == PairWeights::Mode::i64) {
      const std::int64_t* wv = w.w64.data();
      for (std::size_t r = 0; r < p; ++r) acc += static_cast<int128>(wv[r]) * chi[r];
    } else {
      const int128* wv = w.w128.data();
      for (std::size_t r = 0; r < p; ++r) acc += wv[r] * chi[r];
    }
    return acc;
  }

  /// Divides an n!-scaled sum by n!, throwing InvariantError if it is not an
  /// exact nonnegative multiple.
  BigInt unscale(const BigInt& scaled) const;
  bool fast_is_zero(int128 scaled) const;  // also checks divisibility/sign

  bool has_fixed_width() const noexcept { return nfact128_ != 0; }

 private:
  const CharacterTable* table_;
  BigInt nfact_;
  int128 nfact128_ = 0;                 // 0 when n! exceeds int128
  std::vector<std::int64_t> class64_;   // empty when some class size exceeds int64
  std::vector<int128> class128_;        // empty when n! exceeds int128
  int128 max_dim_ = 0;                  // max_k f^k, bounds |chi_k(rho)|
};

}  // namespace detail

}  // namespace kronload
