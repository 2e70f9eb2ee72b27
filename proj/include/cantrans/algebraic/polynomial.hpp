#pragma once

#include <string>
#include <utility>
#include <vector>

#include "cantrans/natural.hpp"
#include "cantrans/numeric/interval.hpp"

namespace cantrans::algebraic {

// Dense univariate polynomial with rational coefficients, lowest degree
// first. Trailing zeros are always stripped, so the zero polynomial has no
// coefficients and degree -1.
class Poly {
 public:
  Poly() = default;
  explicit Poly(std::vector<Rational> coeffs);
  static Poly from_integers(const std::vector<Natural>& coeffs);
  static Poly constant(const Rational& c);
  static Poly monomial(const Rational& c, std::size_t degree);

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<Rational>& coeffs() const { return c_; }
  Rational coeff(std::size_t i) const { return i < c_.size() ? c_[i] : Rational(0); }
  const Rational& leading() const { return c_.back(); }

  Poly derivative() const;
  Poly monic() const;
  // Scaled to integer coefficients with gcd 1 and positive leading coefficient.
  std::vector<Natural> primitive_integer() const;
  // c_i == c_{d-i} for all i, or c_i == -c_{d-i} for all i.
  bool is_reciprocal() const;

  Rational eval(const Rational& x) const;
  numeric::Interval eval(const numeric::Interval& x, numeric::Precision prec) const;
  numeric::ComplexBox eval(const numeric::ComplexBox& z, numeric::Precision prec) const;

  friend Poly operator+(const Poly& a, const Poly& b);
  friend Poly operator-(const Poly& a, const Poly& b);
  friend Poly operator*(const Poly& a, const Poly& b);
  friend Poly operator*(const Poly& a, const Rational& s);
  friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }
  Poly operator-() const;

  std::string to_string() const;

 private:
  void trim();
  std::vector<Rational> c_;
};

// Quotient and remainder of a by b (b nonzero).
std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b);
Poly mod(const Poly& a, const Poly& b);
// Monic gcd; gcd(0, 0) = 0.
Poly gcd(const Poly& a, const Poly& b);
// Returns (g, s, t) with s a + t b = g = gcd(a, b).
struct ExtendedGcd {
  Poly g;
  Poly s;
  Poly t;
};
ExtendedGcd extended_gcd(const Poly& a, const Poly& b);

bool is_square_free(const Poly& f);

// Sturm chain of a square-free polynomial; counts distinct real roots.
class SturmSequence {
 public:
  explicit SturmSequence(const Poly& f);
  // Roots in the half-open interval (lo, hi].
  std::size_t count(const Rational& lo, const Rational& hi) const;
  // Roots in the closed interval [lo, hi].
  std::size_t count_closed(const Rational& lo, const Rational& hi) const;
  std::size_t count_real() const;

 private:
  std::size_t variations_at(const Rational& x) const;
  std::size_t variations_at_infinity(int sign) const;
  std::vector<Poly> chain_;
};

// Cauchy bound: every complex root has modulus below this value.
Rational root_bound(const Poly& f);

}  // namespace cantrans::algebraic
