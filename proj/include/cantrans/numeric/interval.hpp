#pragma once

#include <string>

#include <gmpxx.h>
#include <mpfr.h>

namespace cantrans::numeric {

using Precision = mpfr_prec_t;

// Closed real interval [lo, hi] with MPFR endpoints. Every operation rounds
// the lower endpoint down and the upper endpoint up, so the result encloses
// the exact image of the operands. Result precision is the larger of the
// operand precisions.
class Interval {
 public:
  explicit Interval(Precision prec = 128);
  Interval(const Interval& other);
  Interval(Interval&& other) noexcept;
  Interval& operator=(const Interval& other);
  Interval& operator=(Interval&& other) noexcept;
  ~Interval();

  static Interval point(const mpz_class& v, Precision prec);
  static Interval point(long v, Precision prec);
  static Interval enclose(const mpq_class& v, Precision prec);
  static Interval hull(const mpq_class& lo, const mpq_class& hi, Precision prec);
  // Exact endpoints taken from MPFR values (copied, no rounding beyond prec).
  static Interval from_mpfr(mpfr_srcptr lo, mpfr_srcptr hi, Precision prec);

  Precision precision() const noexcept { return prec_; }
  mpfr_srcptr lo() const noexcept { return lo_; }
  mpfr_srcptr hi() const noexcept { return hi_; }
  mpq_class lo_q() const;
  mpq_class hi_q() const;

  bool contains(const mpq_class& v) const;
  bool contains(const Interval& inner) const;
  bool overlaps(const Interval& other) const;
  bool contains_zero() const;
  bool is_positive() const;  // lo > 0
  bool is_negative() const;  // hi < 0
  bool certainly_less(const Interval& other) const;  // hi < other.lo
  bool certainly_less(const mpq_class& v) const;     // hi < v
  bool certainly_greater(const mpq_class& v) const;  // lo > v

  // Upper bound on hi - lo.
  mpq_class width_q() const;
  double width() const;
  // hi - lo < 2^exp2
  bool width_below_pow2(long exp2) const;

  Interval midpoint() const;

  Interval operator-() const;
  friend Interval operator+(const Interval& a, const Interval& b);
  friend Interval operator-(const Interval& a, const Interval& b);
  friend Interval operator*(const Interval& a, const Interval& b);
  friend Interval operator/(const Interval& a, const Interval& b);

  Interval& operator+=(const Interval& b) { return *this = *this + b; }
  Interval& operator-=(const Interval& b) { return *this = *this - b; }
  Interval& operator*=(const Interval& b) { return *this = *this * b; }

  // Decimal rendering: midpoint with `digits` significant digits and a
  // radius rounded up so that [mid - rad, mid + rad] still encloses.
  std::string mid_string(int digits = 40) const;
  std::string rad_string(int digits = 40) const;
  std::string to_string(int digits = 40) const;

 private:
  void set_precision(Precision prec);

  Precision prec_;
  mpfr_t lo_;
  mpfr_t hi_;
};

Interval sqr(const Interval& x);
Interval sqrt(const Interval& x);  // negative part clamped to 0
Interval abs(const Interval& x);
Interval log(const Interval& x);   // requires x > 0
Interval exp(const Interval& x);
Interval pow(const Interval& x, unsigned long n);
Interval max(const Interval& a, const Interval& b);
Interval min(const Interval& a, const Interval& b);
// Intersection of two enclosures of the same quantity; they must overlap.
Interval intersect(const Interval& a, const Interval& b);

mpq_class parse_decimal_exact(const std::string& text);  // "d.ddde±x" or "d.ddd"

// Rectangle in the complex plane.
struct ComplexBox {
  Interval re;
  Interval im;

  ComplexBox() = default;
  ComplexBox(Interval r, Interval i) : re(std::move(r)), im(std::move(i)) {}
  static ComplexBox real(Interval r);

  Precision precision() const { return re.precision() > im.precision() ? re.precision() : im.precision(); }
  bool is_real_exact() const;  // imaginary part is exactly [0, 0]

  friend ComplexBox operator+(const ComplexBox& a, const ComplexBox& b);
  friend ComplexBox operator-(const ComplexBox& a, const ComplexBox& b);
  friend ComplexBox operator*(const ComplexBox& a, const ComplexBox& b);
  friend ComplexBox operator*(const ComplexBox& a, const Interval& s);
};

Interval abs_sqr(const ComplexBox& z);
Interval abs(const ComplexBox& z);
ComplexBox intersect(const ComplexBox& a, const ComplexBox& b);
bool overlaps(const ComplexBox& a, const ComplexBox& b);

}  // namespace cantrans::numeric
