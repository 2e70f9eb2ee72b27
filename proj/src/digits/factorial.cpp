#include "cantrans/digits/factorial.hpp"

#include <algorithm>
#include <string>

#include "cantrans/digits/digits.hpp"
#include "cantrans/error.hpp"
#include "cantrans/modular.hpp"

namespace cantrans::digits {

using modular::mul_mod;
using modular::pow_mod;

namespace {

std::uint64_t ipow(std::uint64_t p, unsigned a) {
  std::uint64_t r = 1;
  for (unsigned i = 0; i < a; ++i) r *= p;
  return r;
}

// CRT basis e_j with e_j = 1 mod m_j and 0 mod m_i (i != j), and the inverse
// of the cofactor b / m_j modulo m_j.
void crt_setup(const BaseFactorization& bf, std::vector<std::uint64_t>& cofactor_inverse,
               std::vector<std::uint64_t>& coeff) {
  const std::uint64_t b = bf.base();
  for (const auto& f : bf.factors()) {
    std::uint64_t cof = b / f.modulus;
    auto inv = modular::inverse(cof % f.modulus, f.modulus);
    require(inv.has_value(), ErrorKind::internal_consistency, "cofactor not invertible");
    cofactor_inverse.push_back(*inv);
    coeff.push_back(mul_mod(cof, *inv, b));
  }
}

std::uint64_t crt_combine(const std::vector<std::uint64_t>& residues, const std::vector<std::uint64_t>& coeff,
                          std::uint64_t b) {
  std::uint64_t x = 0;
  for (std::size_t j = 0; j < residues.size(); ++j) {
    std::uint64_t term = mul_mod(residues[j], coeff[j], b);
    x = static_cast<std::uint64_t>((static_cast<modular::u128>(x) + term) % b);
  }
  return x;
}

}  // namespace

BaseFactorization BaseFactorization::of(std::uint64_t b) {
  require(b >= 2, ErrorKind::invalid_base, "base must be at least 2");
  BaseFactorization bf;
  bf.b_ = b;
  for (auto [p, a] : modular::factorize(b)) bf.factors_.push_back({p, a, ipow(p, a)});
  std::sort(bf.factors_.begin(), bf.factors_.end(), [](const PrimePower& x, const PrimePower& y) {
    if (x.theta() != y.theta()) return x.theta() > y.theta();
    return x.modulus < y.modulus;
  });
  return bf;
}

WilsonTable::WilsonTable(std::uint64_t p, unsigned a) : p_(p), a_(a), modulus_(0), epsilon_(-1) {
  require(modular::is_prime(p), ErrorKind::invalid_prime, std::to_string(p) + " is not prime");
  require(a >= 1, ErrorKind::configuration, "Wilson table exponent must be positive");
  long double size = 1;
  for (unsigned i = 0; i < a; ++i) size *= static_cast<long double>(p);
  require(size <= static_cast<long double>(max_modulus), ErrorKind::configuration,
          "prime power " + std::to_string(p) + "^" + std::to_string(a) + " exceeds the Wilson table limit");
  modulus_ = ipow(p, a);
  epsilon_ = (p == 2 && a >= 3) ? 1 : -1;
  partial_.resize(modulus_ + 1);
  std::uint64_t acc = 1 % modulus_;
  partial_[0] = static_cast<std::uint32_t>(acc);
  for (std::uint64_t j = 1; j <= modulus_; ++j) {
    if (j % p != 0) acc = acc * j % modulus_;
    partial_[j] = static_cast<std::uint32_t>(acc);
  }
  std::uint64_t expected = epsilon_ == 1 ? 1 % modulus_ : modulus_ - 1;
  require(partial_[modulus_] == expected, ErrorKind::internal_consistency,
          "generalized Wilson sign check failed for " + std::to_string(p) + "^" + std::to_string(a));
}

std::uint64_t factorial_unit_mod(const Natural& n, const WilsonTable& table) {
  require_natural(n, "n");
  const std::uint64_t m = table.modulus();
  const std::uint64_t p = table.p();
  std::uint64_t result = 1 % m;
  bool negate = false;
  Natural x = n, q;
  while (sgn(x) > 0) {
    auto r = static_cast<std::uint64_t>(mpz_fdiv_q_ui(q.get_mpz_t(), x.get_mpz_t(), static_cast<unsigned long>(m)));
    result = mul_mod(result, table.partial(r), m);
    if (table.epsilon() == -1 && mpz_odd_p(q.get_mpz_t()) != 0) negate = !negate;
    mpz_fdiv_q_ui(x.get_mpz_t(), x.get_mpz_t(), static_cast<unsigned long>(p));
  }
  if (negate) result = (m - result) % m;
  return result;
}

std::uint64_t factorial_unit_mod(const Natural& n, std::uint64_t p, unsigned a, const WilsonTable& table) {
  require(table.p() == p && table.a() == a, ErrorKind::configuration, "Wilson table built for a different prime power");
  return factorial_unit_mod(n, table);
}

LnzdEngine::LnzdEngine(std::uint64_t b) : LnzdEngine(BaseFactorization::of(b)) {}

LnzdEngine::LnzdEngine(BaseFactorization bf) : bf_(std::move(bf)) {
  for (const auto& f : bf_.factors()) {
    tables_.emplace_back(f.p, f.a);
    unit_group_order_.push_back(f.modulus / f.p * (f.p - 1));
  }
  crt_setup(bf_, cofactor_inverse_, crt_coeff_);
}

Natural LnzdEngine::factorial_valuation(const Natural& n) const {
  Natural t;
  bool first = true;
  for (const auto& f : bf_.factors()) {
    Natural e = legendre_valuation_factorial(n, f.p);
    mpz_fdiv_q_ui(e.get_mpz_t(), e.get_mpz_t(), f.a);
    if (first || e < t) t = e;
    first = false;
  }
  return t;
}

std::vector<std::uint64_t> LnzdEngine::local_residues(const Natural& n) const {
  require(sgn(n) > 0, ErrorKind::invalid_parameters, "n must be positive");
  const auto& fs = bf_.factors();
  std::vector<Natural> e(fs.size());
  Natural t;
  for (std::size_t j = 0; j < fs.size(); ++j) {
    e[j] = legendre_valuation_factorial(n, fs[j].p);
    Natural tj;
    mpz_fdiv_q_ui(tj.get_mpz_t(), e[j].get_mpz_t(), fs[j].a);
    if (j == 0 || tj < t) t = tj;
  }
  std::vector<std::uint64_t> residues(fs.size());
  for (std::size_t j = 0; j < fs.size(); ++j) {
    const auto& f = fs[j];
    Natural excess = e[j] - t * f.a;
    std::uint64_t local = 0;
    if (excess < f.a) local = pow_mod(f.p, excess.get_ui(), f.modulus);
    std::uint64_t unit = factorial_unit_mod(n, tables_[j]);
    std::uint64_t cof = pow_mod(cofactor_inverse_[j], mod_u64(t, unit_group_order_[j]), f.modulus);
    residues[j] = mul_mod(mul_mod(local, unit, f.modulus), cof, f.modulus);
  }
  return residues;
}

std::uint64_t LnzdEngine::lnzd_factorial(const Natural& n) const {
  std::uint64_t x = crt_combine(local_residues(n), crt_coeff_, bf_.base());
  require(x != 0, ErrorKind::internal_consistency, "U_b(n!) assembled to 0 mod b");
  return x;
}

std::uint64_t lnzd_factorial(const Natural& n, const BaseFactorization& bf) { return LnzdEngine(bf).lnzd_factorial(n); }

std::uint64_t oracle_lnzd_factorial(std::uint64_t n, std::uint64_t b) {
  require(b >= 2, ErrorKind::invalid_base, "base must be at least 2");
  require(n >= 1, ErrorKind::invalid_parameters, "n must be positive");
  require(n <= oracle_guard, ErrorKind::oracle_scale, "oracle limited to n <= " + std::to_string(oracle_guard));
  Natural f;
  mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n));
  return lnzd(f, b);
}

std::vector<std::uint64_t> oracle_lnzd_factorial_prefix(std::uint64_t n_max, std::uint64_t b) {
  require(b >= 2, ErrorKind::invalid_base, "base must be at least 2");
  require(n_max <= oracle_guard, ErrorKind::oracle_scale, "oracle limited to n <= " + std::to_string(oracle_guard));
  std::vector<std::uint64_t> out;
  out.reserve(n_max);
  Natural u = 1;
  const Natural base = from_u64(b);
  for (std::uint64_t n = 1; n <= n_max; ++n) {
    u *= static_cast<unsigned long>(n);
    mpz_remove(u.get_mpz_t(), u.get_mpz_t(), base.get_mpz_t());
    out.push_back(mod_u64(u, b));
  }
  return out;
}

FactorialUnitStepper::FactorialUnitStepper(std::uint64_t b) : bf_(BaseFactorization::of(b)) {
  const auto k = bf_.factors().size();
  exponent_.assign(k, 0);
  for (const auto& f : bf_.factors()) unit_.push_back(1 % f.modulus);
  crt_setup(bf_, cofactor_inverse_, crt_coeff_);
  for (const auto& f : bf_.factors()) cofactor_power_.push_back(1 % f.modulus);
}

std::uint64_t FactorialUnitStepper::next() {
  ++n_;
  const auto& fs = bf_.factors();
  std::uint64_t t = UINT64_MAX;
  for (std::size_t j = 0; j < fs.size(); ++j) {
    std::uint64_t x = n_;
    while (x % fs[j].p == 0) {
      x /= fs[j].p;
      ++exponent_[j];
    }
    unit_[j] = mul_mod(unit_[j], x % fs[j].modulus, fs[j].modulus);
    t = std::min(t, exponent_[j] / fs[j].a);
  }
  for (; t_ < t; ++t_) {
    for (std::size_t j = 0; j < fs.size(); ++j)
      cofactor_power_[j] = mul_mod(cofactor_power_[j], cofactor_inverse_[j], fs[j].modulus);
  }
  auto& residues = residues_;
  residues.resize(fs.size());
  for (std::size_t j = 0; j < fs.size(); ++j) {
    const auto& f = fs[j];
    std::uint64_t excess = exponent_[j] - t * f.a;
    std::uint64_t local = excess >= f.a ? 0 : pow_mod(f.p, excess, f.modulus);
    residues[j] = mul_mod(mul_mod(local, unit_[j], f.modulus), cofactor_power_[j], f.modulus);
  }
  std::uint64_t x = crt_combine(residues, crt_coeff_, bf_.base());
  require(x != 0, ErrorKind::internal_consistency, "U_b(n!) assembled to 0 mod b");
  return x;
}

}  // namespace cantrans::digits
