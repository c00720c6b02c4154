#include "kronload/exact.hpp"

#include <algorithm>

namespace kronload {

namespace {

constexpr int128 k_int128_max = static_cast<int128>((~static_cast<unsigned __int128>(0)) >> 1);
constexpr int128 k_int128_min = -k_int128_max - 1;

}  // namespace

BigInt to_big(int128 value) {
  // mpz has no 128-bit constructor; go through two 64-bit halves.
  const bool negative = value < 0;
  unsigned __int128 magnitude =
      negative ? static_cast<unsigned __int128>(-(value + 1)) + 1 : static_cast<unsigned __int128>(value);
  const auto hi = static_cast<std::uint64_t>(magnitude >> 64);
  const auto lo = static_cast<std::uint64_t>(magnitude);
  BigInt out;
  mpz_import(out.get_mpz_t(), 1, 1, sizeof(std::uint64_t), 0, 0, &hi);
  out <<= 64;
  BigInt low;
  mpz_import(low.get_mpz_t(), 1, 1, sizeof(std::uint64_t), 0, 0, &lo);
  out += low;
  if (negative) out = -out;
  return out;
}

BigInt to_big(std::int64_t value) {
  return to_big(static_cast<int128>(value));
}

std::optional<std::int64_t> to_int64(const BigInt& value) {
  static_assert(sizeof(long) == sizeof(std::int64_t));
  if (!value.fits_slong_p()) return std::nullopt;
  return static_cast<std::int64_t>(value.get_si());
}

std::optional<int128> to_int128(const BigInt& value) {
  static const BigInt lo = to_big(k_int128_min);
  static const BigInt hi = to_big(k_int128_max);
  if (value < lo || value > hi) return std::nullopt;
  const bool negative = value < 0;
  BigInt magnitude = negative ? BigInt(-value) : value;
  unsigned __int128 acc = 0;
  std::uint64_t words[2] = {0, 0};
  std::size_t count = 0;
  mpz_export(words, &count, -1, sizeof(std::uint64_t), 0, 0, magnitude.get_mpz_t());
  acc = (static_cast<unsigned __int128>(words[1]) << 64) | words[0];
  if (negative) return static_cast<int128>(-acc);
  return static_cast<int128>(acc);
}

std::string to_string(int128 value) {
  if (value == 0) return "0";
  const bool negative = value < 0;
  unsigned __int128 magnitude =
      negative ? static_cast<unsigned __int128>(-(value + 1)) + 1 : static_cast<unsigned __int128>(value);
  std::string digits;
  while (magnitude > 0) {
    digits.push_back(static_cast<char>('0' + static_cast<int>(magnitude % 10)));
    magnitude /= 10;
  }
  if (negative) digits.push_back('-');
  std::reverse(digits.begin(), digits.end());
  return digits;
}

BigInt factorial(int n) {
  BigInt out;
  mpz_fac_ui(out.get_mpz_t(), static_cast<unsigned long>(std::max(n, 0)));
  return out;
}

}  // namespace kronload
