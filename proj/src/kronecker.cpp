#include "kronload/kronecker.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>

#include "kronload/error.hpp"

namespace kronload {

Triple::Triple(Partition l, Partition m, Partition v) : lambda(std::move(l)), mu(std::move(m)), nu(std::move(v)) {
  if (lambda.size() != mu.size() || lambda.size() != nu.size()) {
    throw DomainError("triple sizes differ: " + std::to_string(lambda.size()) + ", " + std::to_string(mu.size()) +
                      ", " + std::to_string(nu.size()));
  }
}

Triple Triple::sorted() const {
  std::array<Partition, 3> items{lambda, mu, nu};
  std::sort(items.begin(), items.end(), [](const Partition& a, const Partition& b) { return compare_lex(a, b) > 0; });
  return Triple(items[0], items[1], items[2]);
}

namespace detail {

namespace {

int128 abs128(int128 v) { return v < 0 ? -v : v; }

}  // namespace

KroneckerKernel::KroneckerKernel(const CharacterTable& table) : table_(&table), nfact_(factorial(table.n())) {
  const std::size_t p = table.size();
  if (auto f = to_int128(nfact_); f && table.fits_int64()) {
    nfact128_ = *f;
    class128_.reserve(p);
    bool all64 = true;
    for (const auto& c : table.classes()) {
      class128_.push_back(*to_int128(c.class_size));
      if (!c.class_size.fits_slong_p()) all64 = false;
    }
    if (all64) {
      for (int128 c : class128_) class64_.push_back(static_cast<std::int64_t>(c));
    }
    const std::size_t id = table.identity_column();
    for (std::size_t k = 0; k < p; ++k) max_dim_ = std::max<int128>(max_dim_, table.value64(k, id));
  }
}

void KroneckerKernel::weights(std::size_t i, std::size_t j, PairWeights& out) const {
  const std::size_t p = table_->size();
  out.mode = PairWeights::Mode::big;
  if (nfact128_ != 0) {
    const auto ci = table_->row64(i);
    const auto cj = table_->row64(j);
    // |n! g| <= sum_rho |w_rho| |chi_k(rho)| <= (sum |w|) * max_k f^k.
    int128 total = 0;
    bool ok = true;
    out.w128.resize(p);
    for (std::size_t r = 0; r < p && ok; ++r) {
      int128 w;
      ok = checked_mul(class128_[r], static_cast<int128>(ci[r]), w) && checked_mul(w, cj[r], w) &&
           checked_add(total, abs128(w), total);
      out.w128[r] = w;
    }
    int128 bound;
    if (ok && checked_mul(total, max_dim_, bound)) {
      bool fits64 = !class64_.empty();
      if (fits64) {
        out.w64.resize(p);
        for (std::size_t r = 0; r < p; ++r) {
          const int128 w = out.w128[r];
          if (w > INT64_MAX || w < INT64_MIN) {
            fits64 = false;
            break;
          }
          out.w64[r] = static_cast<std::int64_t>(w);
        }
      }
      out.mode = fits64 ? PairWeights::Mode::i64 : PairWeights::Mode::i128;
      return;
    }
  }
  out.wbig.resize(p);
  for (std::size_t r = 0; r < p; ++r) {
    out.wbig[r] = table_->classes()[r].class_size * table_->value(i, r) * table_->value(j, r);
  }
}

BigInt KroneckerKernel::scaled_big(const PairWeights& w, std::size_t k) const {
  if (w.mode != PairWeights::Mode::big) return to_big(scaled_fast(w, k));
  BigInt acc = 0;
  for (std::size_t r = 0; r < table_->size(); ++r) acc += w.wbig[r] * table_->value(k, r);
  return acc;
}

BigInt KroneckerKernel::unscale(const BigInt& scaled) const {
  if (scaled < 0 || mpz_divisible_p(scaled.get_mpz_t(), nfact_.get_mpz_t()) == 0) {
    throw InvariantError("character sum " + scaled.get_str() + " is not a nonnegative multiple of " +
                         std::to_string(table_->n()) + "!; the character table is inconsistent");
  }
  return scaled / nfact_;
}

bool KroneckerKernel::fast_is_zero(int128 scaled) const {
  if (scaled == 0) return true;
  if (scaled < 0 || scaled % nfact128_ != 0) {
    throw InvariantError("character sum " + to_string(scaled) + " is not a nonnegative multiple of " +
                         std::to_string(table_->n()) + "!; the character table is inconsistent");
  }
  return false;
}

}  // namespace detail

namespace {

void require_table_size(const Partition& p, const CharacterTable& table) {
  if (p.size() != table.n()) {
    throw DomainError("partition " + format(p) + " has size " + std::to_string(p.size()) +
                      " but the character table is for n=" + std::to_string(table.n()));
  }
}

}  // namespace

KroneckerValue kron(const Triple& t, const CharacterTable& table) {
  require_table_size(t.lambda, table);
  const auto& order = table.order();
  detail::KroneckerKernel kernel(table);
  detail::KroneckerKernel::PairWeights w;
  kernel.weights(order.index_of(t.lambda), order.index_of(t.mu), w);
  return {kernel.unscale(kernel.scaled_big(w, order.index_of(t.nu)))};
}

std::vector<std::pair<Partition, KroneckerValue>> kron_row(const Partition& lambda, const Partition& mu,
                                                           const CharacterTable& table) {
  require_table_size(lambda, table);
  require_table_size(mu, table);
  const auto& order = table.order();
  detail::KroneckerKernel kernel(table);
  detail::KroneckerKernel::PairWeights w;
  kernel.weights(order.index_of(lambda), order.index_of(mu), w);
  std::vector<std::pair<Partition, KroneckerValue>> out;
  out.reserve(table.size());
  for (std::size_t k = 0; k < table.size(); ++k) {
    out.emplace_back(order[k], KroneckerValue{kernel.unscale(kernel.scaled_big(w, k))});
  }
  return out;
}

bool depth_admissible(int d_lambda, int d_mu, int d_nu) {
  return std::abs(d_lambda - d_mu) <= d_nu && d_nu <= d_lambda + d_mu;
}

bool depth_admissible(const Triple& t) {
  return depth_admissible(depth(t.lambda), depth(t.mu), depth(t.nu));
}

bool check_symmetry(const Triple& t, const CharacterTable& table) {
  const KroneckerValue base = kron(t, table);
  const std::array<Triple, 5> others{
      Triple(t.mu, t.lambda, t.nu), Triple(t.lambda, t.nu, t.mu), Triple(t.nu, t.lambda, t.mu),
      Triple(t.mu, t.nu, t.lambda), Triple(t.nu, t.mu, t.lambda),
  };
  return std::all_of(others.begin(), others.end(), [&](const Triple& o) { return kron(o, table) == base; });
}

}  // namespace kronload
