#include "cantrans/modular.hpp"

#include <array>

namespace cantrans::modular {

u64 gcd(u64 a, u64 b) {
  while (b != 0) {
    u64 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

u64 lcm(u64 a, u64 b) {
  if (a == 0 || b == 0) return 0;
  return a / gcd(a, b) * b;
}

std::optional<u64> inverse(u64 a, u64 m) {
  if (m == 1) return 0;
  // extended Euclid on signed 128-bit to avoid overflow
  __int128 old_r = static_cast<__int128>(a % m), r = static_cast<__int128>(m);
  __int128 old_s = 1, s = 0;
  while (r != 0) {
    __int128 q = old_r / r;
    __int128 t = old_r - q * r;
    old_r = r;
    r = t;
    t = old_s - q * s;
    old_s = s;
    s = t;
  }
  if (old_r != 1) return std::nullopt;
  __int128 mm = static_cast<__int128>(m);
  old_s %= mm;
  if (old_s < 0) old_s += mm;
  return static_cast<u64>(old_s);
}

bool is_prime(u64 n) {
  if (n < 2) return false;
  constexpr std::array<u64, 12> small = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (u64 p : small) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  unsigned s = 0;
  while ((d & 1U) == 0) {
    d >>= 1U;
    ++s;
  }
  for (u64 a : small) {
    u64 x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (unsigned r = 1; r < s; ++r) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::vector<std::pair<u64, unsigned>> factorize(u64 n) {
  std::vector<std::pair<u64, unsigned>> out;
  if (n < 2) return out;
  if (!is_prime(n)) {
    for (u64 p = 2; p <= n / p; p += (p == 2 ? 1 : 2)) {
      if (n % p != 0) continue;
      unsigned e = 0;
      while (n % p == 0) {
        n /= p;
        ++e;
      }
      out.emplace_back(p, e);
      if (n == 1 || is_prime(n)) break;
    }
  }
  if (n > 1) out.emplace_back(n, 1U);
  return out;
}

u64 multiplicative_order(u64 q, u64 c) {
  if (c == 1) return 1;
  u64 x = q % c;
  u64 t = 1;
  while (x != 1) {
    x = mul_mod(x, q, c);
    ++t;
    if (t > c) return 0;  // q not a unit mod c
  }
  return t;
}

unsigned valuation(u64 n, u64 p) {
  unsigned e = 0;
  while (n != 0 && n % p == 0) {
    n /= p;
    ++e;
  }
  return e;
}

}  // namespace cantrans::modular
