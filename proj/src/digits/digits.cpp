#include "cantrans/digits/digits.hpp"

#include <string>

#include "cantrans/error.hpp"
#include "cantrans/modular.hpp"

namespace cantrans::digits {

namespace {

void check_base(std::uint64_t b) { require(b >= 2, ErrorKind::invalid_base, "base must be at least 2"); }

void check_positive(const Natural& n) {
  require(sgn(n) > 0, ErrorKind::undefined_valuation, "valuation of zero is undefined");
}

int digit_value(char c, std::uint64_t b) {
  if (c >= '0' && c <= '9') return c - '0';
  if (b <= 36) return c - 'a' + 10;
  if (c >= 'A' && c <= 'Z') return c - 'A' + 10;
  return c - 'a' + 36;
}

}  // namespace

Natural digit_sum(const Natural& n, std::uint64_t b) {
  check_base(b);
  require_natural(n, "n");
  if (sgn(n) == 0) return 0;
  if (b <= 62) {
    // GMP's subquadratic radix conversion: bases up to 36 use 0-9a-z,
    // larger bases use 0-9A-Za-z
    std::string s = n.get_str(static_cast<int>(b));
    unsigned long long acc = 0;
    for (char c : s) acc += static_cast<unsigned long long>(digit_value(c, b));
    return from_u64(acc);
  }
  Natural x = n, total = 0;
  while (sgn(x) > 0) {
    total += mpz_tdiv_q_ui(x.get_mpz_t(), x.get_mpz_t(), static_cast<unsigned long>(b));
  }
  return total;
}

std::uint64_t digit_sum(std::uint64_t n, std::uint64_t b) {
  check_base(b);
  std::uint64_t s = 0;
  while (n > 0) {
    s += n % b;
    n /= b;
  }
  return s;
}

Natural valuation(const Natural& n, std::uint64_t b) {
  check_base(b);
  check_positive(n);
  Natural rest;
  return Natural(mpz_remove(rest.get_mpz_t(), n.get_mpz_t(), from_u64(b).get_mpz_t()));
}

Natural unit_part(const Natural& n, std::uint64_t b) {
  check_base(b);
  check_positive(n);
  Natural rest;
  mpz_remove(rest.get_mpz_t(), n.get_mpz_t(), from_u64(b).get_mpz_t());
  return rest;
}

std::uint64_t lnzd(const Natural& n, std::uint64_t b) {
  std::uint64_t r = mod_u64(unit_part(n, b), b);
  require(r != 0, ErrorKind::internal_consistency, "unit part divisible by the base");
  return r;
}

Natural legendre_valuation_factorial(const Natural& n, std::uint64_t p) {
  require_natural(n, "n");
  require(modular::is_prime(p), ErrorKind::invalid_prime, std::to_string(p) + " is not prime");
  Natural floor_sum = 0;
  Natural q = n;
  while (sgn(q) > 0) {
    mpz_tdiv_q_ui(q.get_mpz_t(), q.get_mpz_t(), static_cast<unsigned long>(p));
    floor_sum += q;
  }
  Natural numerator = n - digit_sum(n, p);
  Natural digit_form;
  require(mpz_divisible_ui_p(numerator.get_mpz_t(), static_cast<unsigned long>(p - 1)) != 0,
          ErrorKind::internal_consistency, "n - s_p(n) not divisible by p - 1");
  mpz_divexact_ui(digit_form.get_mpz_t(), numerator.get_mpz_t(), static_cast<unsigned long>(p - 1));
  require(floor_sum == digit_form, ErrorKind::internal_consistency, "Legendre forms disagree");
  return floor_sum;
}

}  // namespace cantrans::digits
