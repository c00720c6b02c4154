#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kronload/exact.hpp"

namespace kronload {

/// An integer partition stored as its positive parts in weakly decreasing
/// order. The zero-padded length-n vector used by the loading matrices is a
/// view produced on demand (see `padded`).
class Partition {
 public:
  Partition() = default;

  /// Validates that `parts` is weakly decreasing and strictly positive.
  /// Trailing zeros are dropped. Throws DomainError otherwise.
  explicit Partition(std::vector<int> parts);

  /// The single-row partition (n).
  static Partition row(int n);
  /// The single-column partition (1^n).
  static Partition column(int n);

  const std::vector<int>& parts() const noexcept { return parts_; }
  int size() const noexcept { return size_; }
  int length() const noexcept { return static_cast<int>(parts_.size()); }
  bool empty() const noexcept { return parts_.empty(); }

  /// i-th part (0-based) with implicit trailing zeros.
  int operator[](std::size_t i) const noexcept { return i < parts_.size() ? parts_[i] : 0; }
  int largest() const noexcept { return parts_.empty() ? 0 : parts_.front(); }

  /// Zero-padded vector of length `width` (width >= length()).
  std::vector<int> padded(int width) const;

  friend bool operator==(const Partition&, const Partition&) = default;

 private:
  std::vector<int> parts_;
  int size_ = 0;
};

/// Lexicographic comparison of the zero-padded vectors. Throws DomainError if
/// the two partitions have different sizes.
std::strong_ordering compare_lex(const Partition& a, const Partition& b);

Partition conjugate(const Partition& lambda);

/// n - lambda_1.
int depth(const Partition& lambda);

/// Parses `a,b^k,...` with optional parentheses, whitespace and trailing
/// zeros. When `expected_size` is given the sum must match.
Partition parse_partition(std::string_view text, std::optional<int> expected_size = std::nullopt);

/// Plain comma list ("5,4,1"), or with runs of length >= 2 collapsed into
/// exponents when `compact` ("2,1^5").
std::string format(const Partition& lambda, bool compact = true);

/// p(n) via Euler's pentagonal-number recurrence; independent of enumeration.
BigInt count_partitions(int n);

/// All partitions of n in descending lexicographic order, with O(n^2) ranking.
/// Immutable after construction and safe to share across threads.
class PartitionSet {
 public:
  explicit PartitionSet(int n);

  int n() const noexcept { return n_; }
  std::size_t size() const noexcept { return items_.size(); }
  const Partition& operator[](std::size_t i) const { return items_[i]; }
  const std::vector<Partition>& items() const noexcept { return items_; }
  auto begin() const noexcept { return items_.begin(); }
  auto end() const noexcept { return items_.end(); }

  /// Position of `lambda` in the ordering. Throws DomainError on size mismatch.
  std::size_t index_of(const Partition& lambda) const;
  /// Same, from raw weakly decreasing positive parts (no validation).
  std::size_t index_of_parts(std::span<const int> parts) const;

  /// index -> index of the conjugate partition.
  const std::vector<std::uint32_t>& conjugate_indices() const noexcept { return conjugates_; }

 private:
  int n_;
  std::vector<Partition> items_;
  // bounded_[s * (n+1) + k] = number of partitions of s with parts <= k
  std::vector<std::uint64_t> bounded_;
  std::vector<std::uint32_t> conjugates_;
};

/// Enumerates the partitions of n (n >= 1) in descending lexicographic order.
PartitionSet enumerate(int n);

/// Shared immutable set for n; repeated calls with the same n reuse one copy.
std::shared_ptr<const PartitionSet> shared_partitions(int n);

}  // namespace kronload
