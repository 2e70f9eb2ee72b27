#pragma once

#include <cstdint>
#include <vector>

#include "cantrans/natural.hpp"

namespace cantrans::digits {

struct PrimePower {
  std::uint64_t p = 0;
  unsigned a = 0;
  std::uint64_t modulus = 0;  // p^a

  std::uint64_t theta() const { return a * (p - 1); }
};

// Prime factorization of a base b, ordered for the non-periodicity argument:
// by a(p - 1) descending, ties by p^a ascending (equivalently a log p).
class BaseFactorization {
 public:
  static BaseFactorization of(std::uint64_t b);

  std::uint64_t base() const { return b_; }
  const std::vector<PrimePower>& factors() const { return factors_; }
  const PrimePower& leading() const { return factors_.front(); }
  bool is_prime_power() const { return factors_.size() == 1; }

 private:
  std::uint64_t b_ = 0;
  std::vector<PrimePower> factors_;
};

// Partial products of the integers in [1, m] coprime to p, modulo p^a, for
// m = 0..p^a. The full-period product equals the sign epsilon (-1, or +1 when
// p = 2 and a >= 3); this is checked when the table is built.
class WilsonTable {
 public:
  static constexpr std::uint64_t max_modulus = std::uint64_t{1} << 24;

  WilsonTable(std::uint64_t p, unsigned a);

  std::uint64_t p() const { return p_; }
  unsigned a() const { return a_; }
  std::uint64_t modulus() const { return modulus_; }
  int epsilon() const { return epsilon_; }
  std::uint64_t partial(std::uint64_t m) const { return partial_[m]; }

 private:
  std::uint64_t p_;
  unsigned a_;
  std::uint64_t modulus_;
  int epsilon_;
  std::vector<std::uint32_t> partial_;
};

// U_p(n!) mod p^a without forming n!, via
// n! = (prod_{j<=n, p∤j} j) * p^floor(n/p) * floor(n/p)!.
std::uint64_t factorial_unit_mod(const Natural& n, std::uint64_t p, unsigned a, const WilsonTable& table);
std::uint64_t factorial_unit_mod(const Natural& n, const WilsonTable& table);

// lnzd_b(n!) for arbitrary n. Holds one WilsonTable per prime power of b and
// is immutable after construction.
class LnzdEngine {
 public:
  explicit LnzdEngine(std::uint64_t b);
  explicit LnzdEngine(BaseFactorization bf);

  const BaseFactorization& factorization() const { return bf_; }
  std::uint64_t base() const { return bf_.base(); }

  std::uint64_t lnzd_factorial(const Natural& n) const;
  // v_b(n!) = min_j floor(v_{p_j}(n!) / a_j)
  Natural factorial_valuation(const Natural& n) const;
  // U_b(n!) mod p_j^{a_j} for every prime power of b (before CRT).
  std::vector<std::uint64_t> local_residues(const Natural& n) const;

 private:
  BaseFactorization bf_;
  std::vector<WilsonTable> tables_;
  std::vector<std::uint64_t> cofactor_inverse_;  // (b / p^a)^{-1} mod p^a
  std::vector<std::uint64_t> crt_coeff_;         // CRT basis elements mod b
  std::vector<std::uint64_t> unit_group_order_;  // phi(p^a)
};

std::uint64_t lnzd_factorial(const Natural& n, const BaseFactorization& bf);

// Exact big-integer oracle: forms n!, strips base-b zeros, returns the last
// digit. Limited to n <= oracle_guard.
inline constexpr std::uint64_t oracle_guard = 100000;
std::uint64_t oracle_lnzd_factorial(std::uint64_t n, std::uint64_t b);

// Oracle values lnzd_b(n!) for n = 1..n_max, keeping U_b(n!) as an exact
// big integer and multiplying in one factor at a time.
std::vector<std::uint64_t> oracle_lnzd_factorial_prefix(std::uint64_t n_max, std::uint64_t b);

// Walks n = 1, 2, 3, ... maintaining v_{p_j}(n!) and U_{p_j}(n!) mod p_j^{a_j}
// incrementally; each step costs O(number of primes of b).
class FactorialUnitStepper {
 public:
  explicit FactorialUnitStepper(std::uint64_t b);

  std::uint64_t n() const { return n_; }
  // Advances to n + 1 and returns lnzd_b((n + 1)!).
  std::uint64_t next();

 private:
  BaseFactorization bf_;
  std::uint64_t n_ = 0;
  std::uint64_t t_ = 0;
  std::vector<std::uint64_t> exponent_;
  std::vector<std::uint64_t> unit_;
  std::vector<std::uint64_t> cofactor_inverse_;
  std::vector<std::uint64_t> cofactor_power_;  // cofactor_inverse_^t
  std::vector<std::uint64_t> crt_coeff_;
  std::vector<std::uint64_t> residues_;
};

}  // namespace cantrans::digits
