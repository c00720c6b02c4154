#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "kronload/exact.hpp"
#include "kronload/partitions.hpp"

namespace kronload {

/// Conjugacy-class data for cycle type rho: z_rho = prod_i i^{m_i} m_i! and
/// class size n!/z_rho.
struct ClassData {
  Partition cycle_type;
  BigInt centralizer_order;
  BigInt class_size;
};

BigInt centralizer_order(const Partition& rho);

/// chi_lambda(rho) by the Murnaghan-Nakayama rule with a per-call memo.
/// Independent of `build_table`; used for spot checks and small n.
BigInt mn_character(const Partition& lambda, const Partition& rho);

/// f^lambda by the hook length formula.
BigInt dimension(const Partition& lambda);

struct TableOptions {
  /// Refuse builds whose working set is estimated above this many bytes.
  std::size_t memory_budget_bytes = std::size_t{2} << 30;
  /// 0 = hardware concurrency.
  unsigned threads = 0;
};

/// Exact irreducible character table of S_n. Rows (lambda) and columns (rho)
/// both follow the descending lexicographic order of PartitionSet. Values are
/// held as int64 when every entry fits (always true for n <= 33) and as
/// BigInt otherwise.
class CharacterTable {
 public:
  CharacterTable(std::shared_ptr<const PartitionSet> order, std::vector<std::int64_t> values);
  CharacterTable(std::shared_ptr<const PartitionSet> order, std::vector<BigInt> values);

  /// Same values held as BigInt even when they fit in int64; forces every
  /// consumer onto its arbitrary-precision path.
  static CharacterTable widened(const CharacterTable& table);

  int n() const noexcept { return order_->n(); }
  std::size_t size() const noexcept { return order_->size(); }
  const PartitionSet& order() const noexcept { return *order_; }
  std::shared_ptr<const PartitionSet> order_ptr() const noexcept { return order_; }
  const std::vector<ClassData>& classes() const noexcept { return classes_; }

  bool fits_int64() const noexcept { return big_.empty(); }

  BigInt value(std::size_t row, std::size_t col) const;
  std::int64_t value64(std::size_t row, std::size_t col) const { return small_[row * size() + col]; }
  /// Row of int64 values; only valid when fits_int64().
  std::span<const std::int64_t> row64(std::size_t row) const {
    return {small_.data() + row * size(), size()};
  }

  /// Column index of the identity class (1^n).
  std::size_t identity_column() const noexcept { return size() - 1; }

  friend bool operator==(const CharacterTable& a, const CharacterTable& b);

 private:
  struct keep_wide {};
  CharacterTable(std::shared_ptr<const PartitionSet> order, std::vector<BigInt> values, keep_wide);
  void init_classes();

  std::shared_ptr<const PartitionSet> order_;
  std::vector<std::int64_t> small_;
  std::vector<BigInt> big_;
  std::vector<ClassData> classes_;
};

/// Estimated peak bytes for build_table(n); compared against the budget.
std::size_t estimate_table_bytes(int n);

/// Builds the full table by dynamic programming over sizes: the table of S_m
/// is assembled from the tables of S_{m-k} by stripping a border strip of
/// length rho_1 (the largest cycle). Rows are computed in parallel.
/// Throws ResourceError above the memory budget.
CharacterTable build_table(int n, const TableOptions& options = {});

namespace detail {

/// A border strip of the requested length removed from a shape: the residual
/// shape and the sign (-1)^(height - 1).
struct StripRemoval {
  std::vector<int> residual;
  int sign;
};

/// All border strips of length `length` in `parts`, via beta-numbers.
std::vector<StripRemoval> remove_border_strips(std::span<const int> parts, int length);

}  // namespace detail

}  // namespace kronload
