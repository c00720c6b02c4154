#include "kronload/partitions.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <mutex>

#include "kronload/error.hpp"

namespace kronload {

Partition::Partition(std::vector<int> parts) : parts_(std::move(parts)) {
  while (!parts_.empty() && parts_.back() == 0) parts_.pop_back();
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    if (parts_[i] <= 0) throw DomainError("partition parts must be positive");
    if (i > 0 && parts_[i] > parts_[i - 1]) throw DomainError("partition parts must be weakly decreasing");
    size_ += parts_[i];
  }
}

Partition Partition::row(int n) {
  return Partition(std::vector<int>{n});
}

Partition Partition::column(int n) {
  return Partition(std::vector<int>(static_cast<std::size_t>(n), 1));
}

std::vector<int> Partition::padded(int width) const {
  std::vector<int> out(static_cast<std::size_t>(std::max(width, length())), 0);
  std::copy(parts_.begin(), parts_.end(), out.begin());
  return out;
}

std::strong_ordering compare_lex(const Partition& a, const Partition& b) {
  if (a.size() != b.size()) {
    throw DomainError("cannot compare partitions of " + std::to_string(a.size()) + " and " +
                      std::to_string(b.size()));
  }
  const std::size_t len = static_cast<std::size_t>(std::max(a.length(), b.length()));
  for (std::size_t i = 0; i < len; ++i) {
    if (a[i] != b[i]) return a[i] <=> b[i];
  }
  return std::strong_ordering::equal;
}

Partition conjugate(const Partition& lambda) {
  std::vector<int> out(static_cast<std::size_t>(lambda.largest()), 0);
  for (int part : lambda.parts()) {
    for (int j = 0; j < part; ++j) ++out[static_cast<std::size_t>(j)];
  }
  return Partition(std::move(out));
}

int depth(const Partition& lambda) {
  return lambda.size() - lambda.largest();
}

namespace {

[[noreturn]] void malformed(std::string_view text, const std::string& why) {
  throw DomainError("malformed partition '" + std::string(text) + "': " + why);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

long parse_number(std::string_view whole, std::string_view token) {
  token = trim(token);
  if (token.empty()) malformed(whole, "empty number");
  long value = 0;
  for (char c : token) {
    if (!std::isdigit(static_cast<unsigned char>(c))) malformed(whole, "unexpected character '" + std::string(1, c) + "'");
    value = value * 10 + (c - '0');
    if (value > 100000) malformed(whole, "number too large");
  }
  return value;
}

}  // namespace

Partition parse_partition(std::string_view text, std::optional<int> expected_size) {
  std::string_view body = trim(text);
  if (!body.empty() && body.front() == '(') {
    if (body.back() != ')') malformed(text, "unbalanced parenthesis");
    body = trim(body.substr(1, body.size() - 2));
  }
  if (body.empty()) malformed(text, "no parts");

  std::vector<int> parts;
  while (true) {
    const auto comma = body.find(',');
    const std::string_view item = body.substr(0, comma);
    const auto caret = item.find('^');
    const long part = parse_number(text, item.substr(0, caret));
    long reps = 1;
    if (caret != std::string_view::npos) {
      reps = parse_number(text, item.substr(caret + 1));
      if (reps == 0) malformed(text, "exponent must be positive");
    }
    for (long r = 0; r < reps; ++r) parts.push_back(static_cast<int>(part));
    if (parts.size() > 100000) malformed(text, "too many parts");
    if (comma == std::string_view::npos) break;
    body.remove_prefix(comma + 1);
  }

  // Zeros may only appear as trailing padding.
  while (!parts.empty() && parts.back() == 0) parts.pop_back();
  if (parts.empty()) malformed(text, "no positive parts");
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (parts[i] == 0) malformed(text, "zero part before a positive part");
    if (i > 0 && parts[i] > parts[i - 1]) malformed(text, "parts are not weakly decreasing");
  }
  Partition out(std::move(parts));
  if (expected_size && out.size() != *expected_size) {
    throw DomainError("partition '" + std::string(text) + "' has size " + std::to_string(out.size()) +
                      ", expected " + std::to_string(*expected_size));
  }
  return out;
}

std::string format(const Partition& lambda, bool compact) {
  std::string out;
  const auto& p = lambda.parts();
  for (std::size_t i = 0; i < p.size();) {
    std::size_t j = i + 1;
    if (compact) {
      while (j < p.size() && p[j] == p[i]) ++j;
    }
    if (!out.empty()) out += ',';
    out += std::to_string(p[i]);
    if (j - i >= 2) out += '^' + std::to_string(j - i);
    i = j;
  }
  return out;
}

BigInt count_partitions(int n) {
  if (n < 1) throw DomainError("n must be positive, got " + std::to_string(n));
  std::vector<BigInt> p(static_cast<std::size_t>(n) + 1);
  p[0] = 1;
  for (int m = 1; m <= n; ++m) {
    BigInt acc = 0;
    for (int k = 1;; ++k) {
      const int g1 = k * (3 * k - 1) / 2;
      if (g1 > m) break;
      const bool plus = (k % 2) == 1;
      const auto add = [&](int g) {
        if (g > m) return;
        if (plus) {
          acc += p[static_cast<std::size_t>(m - g)];
        } else {
          acc -= p[static_cast<std::size_t>(m - g)];
        }
      };
      add(g1);
      add(k * (3 * k + 1) / 2);
    }
    p[static_cast<std::size_t>(m)] = acc;
  }
  return p[static_cast<std::size_t>(n)];
}

PartitionSet::PartitionSet(int n) : n_(n) {
  if (n < 0) throw DomainError("n must be nonnegative");
  const std::size_t w = static_cast<std::size_t>(n) + 1;
  bounded_.assign(w * w, 0);
  for (std::size_t k = 0; k < w; ++k) bounded_[k] = 1;  // s = 0
  for (std::size_t s = 1; s < w; ++s) {
    for (std::size_t k = 1; k < w; ++k) {
      // partitions of s with parts <= k: those using k plus those not
      std::uint64_t v = bounded_[s * w + k - 1];
      if (k <= s) v += bounded_[(s - k) * w + k];
      bounded_[s * w + k] = v;
    }
  }

  if (n == 0) {
    items_.emplace_back();
    conjugates_.push_back(0);
    return;
  }

  items_.reserve(static_cast<std::size_t>(bounded_[static_cast<std::size_t>(n) * w + static_cast<std::size_t>(n)]));
  // Successor in descending lexicographic order: lower the rightmost part
  // greater than 1 and refill greedily with parts of that new size.
  std::vector<int> cur{n};
  while (true) {
    items_.emplace_back(cur);
    std::size_t ones = 0;
    while (!cur.empty() && cur.back() == 1) {
      cur.pop_back();
      ++ones;
    }
    if (cur.empty()) break;
    const int x = cur.back() - 1;
    cur.back() = x;
    int rem = static_cast<int>(ones) + 1;
    while (rem > x) {
      cur.push_back(x);
      rem -= x;
    }
    if (rem > 0) cur.push_back(rem);
  }

  conjugates_.resize(items_.size());
  for (std::size_t i = 0; i < items_.size(); ++i) {
    conjugates_[i] = static_cast<std::uint32_t>(index_of(conjugate(items_[i])));
  }
}

std::size_t PartitionSet::index_of(const Partition& lambda) const {
  if (lambda.size() != n_) {
    throw DomainError("partition " + format(lambda) + " has size " + std::to_string(lambda.size()) +
                      ", expected " + std::to_string(n_));
  }
  return index_of_parts(lambda.parts());
}

std::size_t PartitionSet::index_of_parts(std::span<const int> parts) const {
  const std::size_t w = static_cast<std::size_t>(n_) + 1;
  std::uint64_t rank = 0;
  int rem = n_;
  int prev = n_;
  for (int part : parts) {
    const int top = std::min(prev, rem);
    for (int a = part + 1; a <= top; ++a) {
      rank += bounded_[static_cast<std::size_t>(rem - a) * w + static_cast<std::size_t>(a)];
    }
    rem -= part;
    prev = part;
    if (rem == 0) break;
  }
  return static_cast<std::size_t>(rank);
}

PartitionSet enumerate(int n) {
  if (n < 1) throw DomainError("n must be positive, got " + std::to_string(n));
  return PartitionSet(n);
}

std::shared_ptr<const PartitionSet> shared_partitions(int n) {
  static std::mutex mutex;
  static std::map<int, std::weak_ptr<const PartitionSet>> cache;
  std::lock_guard lock(mutex);
  if (auto existing = cache[n].lock()) return existing;
  auto made = std::make_shared<const PartitionSet>(n);
  cache[n] = made;
  return made;
}

}  // namespace kronload
