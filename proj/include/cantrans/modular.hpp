#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace cantrans::modular {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

constexpr u64 mul_mod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

constexpr u64 pow_mod(u64 base, u64 exp, u64 m) {
  if (m == 1) return 0;
  u64 result = 1;
  base %= m;
  while (exp > 0) {
    if (exp & 1U) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1U;
  }
  return result;
}

u64 gcd(u64 a, u64 b);
u64 lcm(u64 a, u64 b);

// Inverse of a modulo m, or nullopt when gcd(a, m) != 1.
std::optional<u64> inverse(u64 a, u64 m);

// Deterministic Miller-Rabin for 64-bit inputs.
bool is_prime(u64 n);

// Trial-division factorization; factors sorted by prime ascending.
std::vector<std::pair<u64, unsigned>> factorize(u64 n);

// Multiplicative order of q modulo c; defined as 1 when c == 1.
u64 multiplicative_order(u64 q, u64 c);

// Largest e with p^e | n, n > 0.
unsigned valuation(u64 n, u64 p);

}  // namespace cantrans::modular
