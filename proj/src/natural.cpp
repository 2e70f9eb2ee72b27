#include "cantrans/natural.hpp"

#include <cctype>
#include <string>

#include "cantrans/error.hpp"

namespace cantrans {

void require_natural(const Natural& n, std::string_view what) {
  require(sgn(n) >= 0, ErrorKind::invalid_parameters, std::string(what) + " must be nonnegative");
}

Natural parse_natural(std::string_view text) {
  std::string s(text);
  require(!s.empty(), ErrorKind::parse, "empty integer");
  for (char c : s) require(std::isdigit(static_cast<unsigned char>(c)) != 0, ErrorKind::parse, "not a natural number: " + s);
  return Natural(s, 10);
}

Rational parse_rational(std::string_view text) {
  std::string s(text);
  require(!s.empty(), ErrorKind::parse, "empty rational");
  auto dot = s.find('.');
  if (dot != std::string::npos) {
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    std::size_t frac = s.size() - dot - 1;
    Natural den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, frac);
    Rational q;
    try {
      q = Rational(mpz_class(digits, 10), den);
    } catch (const std::invalid_argument&) {
      fail(ErrorKind::parse, "bad decimal: " + s);
    }
    q.canonicalize();
    return q;
  }
  Rational q;
  try {
    q = Rational(s, 10);
  } catch (const std::invalid_argument&) {
    fail(ErrorKind::parse, "bad rational: " + s);
  }
  require(sgn(q.get_den()) != 0, ErrorKind::parse, "zero denominator: " + s);
  q.canonicalize();
  return q;
}

std::string to_decimal(const Natural& n) { return n.get_str(10); }

std::string to_string(const Rational& q) {
  Rational c = q;
  c.canonicalize();
  return c.get_str(10);
}

bool fits_u64(const Natural& n) { return sgn(n) >= 0 && mpz_sizeinbase(n.get_mpz_t(), 2) <= 64; }

std::uint64_t to_u64(const Natural& n) {
  require(fits_u64(n), ErrorKind::invalid_parameters, "value does not fit in 64 bits");
  std::uint64_t v = 0;
  mpz_export(&v, nullptr, -1, sizeof v, 0, 0, n.get_mpz_t());
  return v;
}

Natural from_u64(std::uint64_t v) {
  Natural n;
  mpz_import(n.get_mpz_t(), 1, -1, sizeof v, 0, 0, &v);
  return n;
}

std::uint64_t mod_u64(const Natural& n, std::uint64_t m) {
  if (m <= 0xffffffffULL || sizeof(unsigned long) == 8) return mpz_fdiv_ui(n.get_mpz_t(), static_cast<unsigned long>(m));
  Natural r;
  mpz_fdiv_r(r.get_mpz_t(), n.get_mpz_t(), from_u64(m).get_mpz_t());
  return to_u64(r);
}

std::size_t bit_length(const Natural& n) {
  if (sgn(n) == 0) return 0;
  return mpz_sizeinbase(n.get_mpz_t(), 2);
}

}  // namespace cantrans
