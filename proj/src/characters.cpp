#include "kronload/characters.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <utility>

#include "kronload/error.hpp"
#include "kronload/parallel.hpp"

namespace kronload {

namespace detail {

std::vector<StripRemoval> remove_border_strips(std::span<const int> parts, int length) {
  std::vector<StripRemoval> out;
  const int len = static_cast<int>(parts.size());
  if (len == 0 || length <= 0) return out;
  // beta-numbers: first-column hook lengths, strictly decreasing
  std::vector<int> beta(static_cast<std::size_t>(len));
  for (int i = 0; i < len; ++i) beta[static_cast<std::size_t>(i)] = parts[static_cast<std::size_t>(i)] + (len - 1 - i);
  std::vector<char> present(static_cast<std::size_t>(beta.front()) + 1, 0);
  for (int b : beta) present[static_cast<std::size_t>(b)] = 1;

  for (int i = 0; i < len; ++i) {
    const int from = beta[static_cast<std::size_t>(i)];
    const int to = from - length;
    if (to < 0 || present[static_cast<std::size_t>(to)]) continue;
    int crossed = 0;
    for (int j = i + 1; j < len && beta[static_cast<std::size_t>(j)] > to; ++j) ++crossed;
    std::vector<int> moved = beta;
    moved[static_cast<std::size_t>(i)] = to;
    std::sort(moved.begin(), moved.end(), std::greater<>());
    std::vector<int> residual;
    residual.reserve(static_cast<std::size_t>(len));
    for (int k = 0; k < len; ++k) {
      const int part = moved[static_cast<std::size_t>(k)] - (len - 1 - k);
      if (part <= 0) break;
      residual.push_back(part);
    }
    out.push_back({std::move(residual), (crossed % 2 == 0) ? 1 : -1});
  }
  return out;
}

}  // namespace detail

BigInt centralizer_order(const Partition& rho) {
  BigInt z = 1;
  const auto& p = rho.parts();
  for (std::size_t i = 0; i < p.size();) {
    std::size_t j = i;
    while (j < p.size() && p[j] == p[i]) ++j;
    const auto mult = static_cast<unsigned long>(j - i);
    BigInt power;
    mpz_ui_pow_ui(power.get_mpz_t(), static_cast<unsigned long>(p[i]), mult);
    z *= power * factorial(static_cast<int>(mult));
    i = j;
  }
  return z;
}

namespace {

using MemoKey = std::pair<std::vector<int>, std::size_t>;

BigInt mn_recurse(const std::vector<int>& shape, const std::vector<int>& cycles, std::size_t k,
                  std::map<MemoKey, BigInt>& memo) {
  if (k == cycles.size()) return shape.empty() ? BigInt(1) : BigInt(0);
  MemoKey key{shape, k};
  if (auto it = memo.find(key); it != memo.end()) return it->second;
  BigInt acc = 0;
  for (const auto& strip : detail::remove_border_strips(shape, cycles[k])) {
    BigInt sub = mn_recurse(strip.residual, cycles, k + 1, memo);
    if (strip.sign > 0) {
      acc += sub;
    } else {
      acc -= sub;
    }
  }
  memo.emplace(std::move(key), acc);
  return acc;
}

}  // namespace

BigInt mn_character(const Partition& lambda, const Partition& rho) {
  if (lambda.size() != rho.size()) {
    throw DomainError("character argument sizes differ: |lambda| = " + std::to_string(lambda.size()) +
                      ", |rho| = " + std::to_string(rho.size()));
  }
  std::map<MemoKey, BigInt> memo;
  return mn_recurse(lambda.parts(), rho.parts(), 0, memo);
}

BigInt dimension(const Partition& lambda) {
  const Partition cols = conjugate(lambda);
  BigInt hooks = 1;
  for (int i = 0; i < lambda.length(); ++i) {
    for (int j = 0; j < lambda[static_cast<std::size_t>(i)]; ++j) {
      const int arm = lambda[static_cast<std::size_t>(i)] - j - 1;
      const int leg = cols[static_cast<std::size_t>(j)] - i - 1;
      hooks *= arm + leg + 1;
    }
  }
  return factorial(lambda.size()) / hooks;
}

CharacterTable::CharacterTable(std::shared_ptr<const PartitionSet> order, std::vector<std::int64_t> values)
    : order_(std::move(order)), small_(std::move(values)) {
  if (small_.size() != size() * size()) throw DomainError("character table payload has wrong size");
  init_classes();
}

CharacterTable::CharacterTable(std::shared_ptr<const PartitionSet> order, std::vector<BigInt> values)
    : order_(std::move(order)) {
  if (values.size() != size() * size()) throw DomainError("character table payload has wrong size");
  // Narrow when possible so every consumer can use the fast path.
  std::vector<std::int64_t> narrowed;
  narrowed.reserve(values.size());
  bool fits = true;
  for (const auto& v : values) {
    auto s = to_int64(v);
    if (!s) {
      fits = false;
      break;
    }
    narrowed.push_back(*s);
  }
  if (fits) {
    small_ = std::move(narrowed);
  } else {
    big_ = std::move(values);
  }
  init_classes();
}

CharacterTable::CharacterTable(std::shared_ptr<const PartitionSet> order, std::vector<BigInt> values, keep_wide)
    : order_(std::move(order)), big_(std::move(values)) {
  if (big_.size() != size() * size()) throw DomainError("character table payload has wrong size");
  init_classes();
}

CharacterTable CharacterTable::widened(const CharacterTable& table) {
  std::vector<BigInt> values;
  values.reserve(table.size() * table.size());
  for (std::size_t r = 0; r < table.size(); ++r) {
    for (std::size_t c = 0; c < table.size(); ++c) values.push_back(table.value(r, c));
  }
  return CharacterTable(table.order_, std::move(values), keep_wide{});
}

void CharacterTable::init_classes() {
  const BigInt nfact = factorial(n());
  classes_.clear();
  classes_.reserve(size());
  for (const auto& rho : order()) {
    BigInt z = centralizer_order(rho);
    BigInt cls = nfact / z;
    classes_.push_back({rho, std::move(z), std::move(cls)});
  }
}

BigInt CharacterTable::value(std::size_t row, std::size_t col) const {
  if (fits_int64()) return to_big(small_[row * size() + col]);
  return big_[row * size() + col];
}

bool operator==(const CharacterTable& a, const CharacterTable& b) {
  if (a.n() != b.n()) return false;
  if (a.fits_int64() && b.fits_int64()) return a.small_ == b.small_;
  for (std::size_t r = 0; r < a.size(); ++r) {
    for (std::size_t c = 0; c < a.size(); ++c) {
      if (a.value(r, c) != b.value(r, c)) return false;
    }
  }
  return true;
}

std::size_t estimate_table_bytes(int n) {
  // All intermediate tables S_0..S_n are live at the end of the build.
  std::size_t total = 0;
  for (int m = 0; m <= n; ++m) {
    const auto p = static_cast<std::size_t>(m == 0 ? 1 : count_partitions(m).get_ui());
    total += p * p * sizeof(std::int64_t);
  }
  return total;
}

namespace {

inline bool accumulate(std::int64_t& acc, std::int64_t term, int sign) {
  return sign > 0 ? checked_add(acc, term, acc) : checked_sub(acc, term, acc);
}

inline bool accumulate(BigInt& acc, const BigInt& term, int sign) {
  if (sign > 0) {
    acc += term;
  } else {
    acc -= term;
  }
  return true;
}

// Returns false if any int64 accumulation overflowed.
template <class Value>
bool build_all_sizes(int n, unsigned threads, std::vector<std::shared_ptr<const PartitionSet>>& sets,
                     std::vector<std::vector<Value>>& tables) {
  sets.assign(static_cast<std::size_t>(n) + 1, nullptr);
  tables.assign(static_cast<std::size_t>(n) + 1, {});
  sets[0] = shared_partitions(0);
  tables[0] = {Value(1)};
  std::atomic<bool> overflow{false};

  for (int m = 1; m <= n; ++m) {
    sets[static_cast<std::size_t>(m)] = shared_partitions(m);
    const PartitionSet& cur = *sets[static_cast<std::size_t>(m)];
    const std::size_t p = cur.size();

    // Column c = rho: strip length rho_1, remaining cycle type rho minus rho_1.
    std::vector<int> strip_len(p);
    std::vector<std::size_t> rest_index(p);
    for (std::size_t c = 0; c < p; ++c) {
      const auto& parts = cur[c].parts();
      strip_len[c] = parts.front();
      const PartitionSet& rest = *sets[static_cast<std::size_t>(m - parts.front())];
      rest_index[c] = rest.index_of_parts(std::span<const int>(parts).subspan(1));
    }

    std::vector<Value> table(p * p);
    parallel_for(p, threads, [&](std::size_t r) {
      struct Term {
        std::size_t row;
        int sign;
      };
      std::vector<std::vector<Term>> strips(static_cast<std::size_t>(m) + 1);
      std::vector<char> ready(static_cast<std::size_t>(m) + 1, 0);
      const auto& shape = cur[r].parts();
      for (std::size_t c = 0; c < p; ++c) {
        const int a = strip_len[c];
        auto& terms = strips[static_cast<std::size_t>(a)];
        if (!ready[static_cast<std::size_t>(a)]) {
          const PartitionSet& rest = *sets[static_cast<std::size_t>(m - a)];
          for (auto& s : detail::remove_border_strips(shape, a)) {
            terms.push_back({rest.index_of_parts(s.residual), s.sign});
          }
          ready[static_cast<std::size_t>(a)] = 1;
        }
        const auto& sub = tables[static_cast<std::size_t>(m - a)];
        const std::size_t sub_p = sets[static_cast<std::size_t>(m - a)]->size();
        Value acc(0);
        for (const auto& t : terms) {
          if (!accumulate(acc, sub[t.row * sub_p + rest_index[c]], t.sign)) {
            overflow = true;
            return;
          }
        }
        table[r * p + c] = std::move(acc);
      }
    });
    if (overflow) return false;
    tables[static_cast<std::size_t>(m)] = std::move(table);
  }
  return true;
}

}  // namespace

CharacterTable build_table(int n, const TableOptions& options) {
  if (n < 1) throw DomainError("n must be positive, got " + std::to_string(n));
  const std::size_t estimate = estimate_table_bytes(n);
  if (estimate > options.memory_budget_bytes) {
    throw ResourceError("character table for n=" + std::to_string(n) + " needs about " +
                        std::to_string(estimate >> 20) + " MiB, above the budget of " +
                        std::to_string(options.memory_budget_bytes >> 20) + " MiB");
  }
  std::vector<std::shared_ptr<const PartitionSet>> sets;
  {
    std::vector<std::vector<std::int64_t>> tables;
    if (build_all_sizes(n, options.threads, sets, tables)) {
      return CharacterTable(sets.back(), std::move(tables.back()));
    }
  }
  // Some entry left the int64 range; redo the whole build exactly.
  if (estimate * 4 > options.memory_budget_bytes) {
    throw ResourceError("character table for n=" + std::to_string(n) +
                        " needs arbitrary precision and exceeds the memory budget");
  }
  std::vector<std::vector<BigInt>> tables;
  build_all_sizes(n, options.threads, sets, tables);
  return CharacterTable(sets.back(), std::move(tables.back()));
}

}  // namespace kronload
