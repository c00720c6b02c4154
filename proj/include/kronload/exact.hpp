#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <gmpxx.h>

namespace kronload {

// Arbitrary-precision integer used wherever a value may exceed 64 bits.
using BigInt = mpz_class;
using int128 = __int128;

BigInt to_big(int128 value);
BigInt to_big(std::int64_t value);

// Returns nullopt when the value does not fit.
std::optional<std::int64_t> to_int64(const BigInt& value);
std::optional<int128> to_int128(const BigInt& value);

std::string to_string(int128 value);

BigInt factorial(int n);

// Checked helpers for the fixed-width fast paths. Each returns false on
// overflow and leaves the output unspecified.
inline bool checked_add(int128 a, int128 b, int128& out) { return !__builtin_add_overflow(a, b, &out); }
inline bool checked_mul(int128 a, int128 b, int128& out) { return !__builtin_mul_overflow(a, b, &out); }
inline bool checked_add(std::int64_t a, std::int64_t b, std::int64_t& out) {
  return !__builtin_add_overflow(a, b, &out);
}
inline bool checked_sub(std::int64_t a, std::int64_t b, std::int64_t& out) {
  return !__builtin_sub_overflow(a, b, &out);
}

}  // namespace kronload
