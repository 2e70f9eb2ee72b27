#include "cantrans/numeric/interval.hpp"

#include <algorithm>
#include <cstdio>
#include <vector>

#include "cantrans/error.hpp"

namespace cantrans::numeric {

namespace {

Precision join(const Interval& a, const Interval& b) { return std::max(a.precision(), b.precision()); }

// RAII scratch value
struct Scratch {
  mpfr_t v;
  explicit Scratch(Precision p) { mpfr_init2(v, p); }
  ~Scratch() { mpfr_clear(v); }
  Scratch(const Scratch&) = delete;
  Scratch& operator=(const Scratch&) = delete;
};

mpq_class mpfr_to_q(mpfr_srcptr x) {
  mpq_class q;
  mpfr_get_q(q.get_mpq_t(), x);
  return q;
}

}  // namespace

Interval::Interval(Precision prec) : prec_(prec) {
  mpfr_init2(lo_, prec);
  mpfr_init2(hi_, prec);
  mpfr_set_zero(lo_, 1);
  mpfr_set_zero(hi_, 1);
}

Interval::Interval(const Interval& other) : prec_(other.prec_) {
  mpfr_init2(lo_, prec_);
  mpfr_init2(hi_, prec_);
  mpfr_set(lo_, other.lo_, MPFR_RNDD);
  mpfr_set(hi_, other.hi_, MPFR_RNDU);
}

Interval::Interval(Interval&& other) noexcept : prec_(other.prec_) {
  mpfr_init2(lo_, prec_);
  mpfr_init2(hi_, prec_);
  mpfr_swap(lo_, other.lo_);
  mpfr_swap(hi_, other.hi_);
}

Interval& Interval::operator=(const Interval& other) {
  if (this != &other) {
    set_precision(other.prec_);
    mpfr_set(lo_, other.lo_, MPFR_RNDD);
    mpfr_set(hi_, other.hi_, MPFR_RNDU);
  }
  return *this;
}

Interval& Interval::operator=(Interval&& other) noexcept {
  if (this != &other) {
    std::swap(prec_, other.prec_);
    mpfr_swap(lo_, other.lo_);
    mpfr_swap(hi_, other.hi_);
  }
  return *this;
}

Interval::~Interval() {
  mpfr_clear(lo_);
  mpfr_clear(hi_);
}

void Interval::set_precision(Precision prec) {
  if (prec == prec_) return;
  prec_ = prec;
  mpfr_set_prec(lo_, prec);
  mpfr_set_prec(hi_, prec);
}

Interval Interval::point(const mpz_class& v, Precision prec) {
  Interval r(prec);
  mpfr_set_z(r.lo_, v.get_mpz_t(), MPFR_RNDD);
  mpfr_set_z(r.hi_, v.get_mpz_t(), MPFR_RNDU);
  return r;
}

Interval Interval::point(long v, Precision prec) {
  Interval r(prec);
  mpfr_set_si(r.lo_, v, MPFR_RNDD);
  mpfr_set_si(r.hi_, v, MPFR_RNDU);
  return r;
}

Interval Interval::enclose(const mpq_class& v, Precision prec) {
  Interval r(prec);
  mpfr_set_q(r.lo_, v.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(r.hi_, v.get_mpq_t(), MPFR_RNDU);
  return r;
}

Interval Interval::hull(const mpq_class& lo, const mpq_class& hi, Precision prec) {
  require(lo <= hi, ErrorKind::internal_consistency, "interval hull with lo > hi");
  Interval r(prec);
  mpfr_set_q(r.lo_, lo.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(r.hi_, hi.get_mpq_t(), MPFR_RNDU);
  return r;
}

Interval Interval::from_mpfr(mpfr_srcptr lo, mpfr_srcptr hi, Precision prec) {
  Interval r(prec);
  mpfr_set(r.lo_, lo, MPFR_RNDD);
  mpfr_set(r.hi_, hi, MPFR_RNDU);
  require(mpfr_lessequal_p(r.lo_, r.hi_) != 0, ErrorKind::internal_consistency, "interval with lo > hi");
  return r;
}

mpq_class Interval::lo_q() const { return mpfr_to_q(lo_); }
mpq_class Interval::hi_q() const { return mpfr_to_q(hi_); }

bool Interval::contains(const mpq_class& v) const {
  return mpfr_cmp_q(lo_, v.get_mpq_t()) <= 0 && mpfr_cmp_q(hi_, v.get_mpq_t()) >= 0;
}

bool Interval::contains(const Interval& inner) const {
  return mpfr_lessequal_p(lo_, inner.lo_) != 0 && mpfr_greaterequal_p(hi_, inner.hi_) != 0;
}

bool Interval::overlaps(const Interval& other) const {
  return mpfr_lessequal_p(lo_, other.hi_) != 0 && mpfr_lessequal_p(other.lo_, hi_) != 0;
}

bool Interval::contains_zero() const { return mpfr_sgn(lo_) <= 0 && mpfr_sgn(hi_) >= 0; }
bool Interval::is_positive() const { return mpfr_sgn(lo_) > 0; }
bool Interval::is_negative() const { return mpfr_sgn(hi_) < 0; }
bool Interval::certainly_less(const Interval& other) const { return mpfr_less_p(hi_, other.lo_) != 0; }
bool Interval::certainly_less(const mpq_class& v) const { return mpfr_cmp_q(hi_, v.get_mpq_t()) < 0; }
bool Interval::certainly_greater(const mpq_class& v) const { return mpfr_cmp_q(lo_, v.get_mpq_t()) > 0; }

mpq_class Interval::width_q() const { return hi_q() - lo_q(); }

double Interval::width() const {
  Scratch w(prec_ + 1);
  mpfr_sub(w.v, hi_, lo_, MPFR_RNDU);
  return mpfr_get_d(w.v, MPFR_RNDU);
}

bool Interval::width_below_pow2(long exp2) const {
  Scratch w(prec_ + 1);
  mpfr_sub(w.v, hi_, lo_, MPFR_RNDU);
  if (mpfr_zero_p(w.v) != 0) return true;
  Scratch bound(2);
  mpfr_set_ui_2exp(bound.v, 1, exp2, MPFR_RNDN);
  return mpfr_less_p(w.v, bound.v) != 0;
}

Interval Interval::midpoint() const {
  Interval r(prec_ + 1);
  mpfr_add(r.lo_, lo_, hi_, MPFR_RNDD);
  mpfr_add(r.hi_, lo_, hi_, MPFR_RNDU);
  mpfr_div_2ui(r.lo_, r.lo_, 1, MPFR_RNDD);
  mpfr_div_2ui(r.hi_, r.hi_, 1, MPFR_RNDU);
  return r;
}

Interval Interval::operator-() const {
  Interval r(prec_);
  mpfr_neg(r.lo_, hi_, MPFR_RNDD);
  mpfr_neg(r.hi_, lo_, MPFR_RNDU);
  return r;
}

Interval operator+(const Interval& a, const Interval& b) {
  Interval r(join(a, b));
  mpfr_add(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
  mpfr_add(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
  return r;
}

Interval operator-(const Interval& a, const Interval& b) {
  Interval r(join(a, b));
  mpfr_sub(r.lo_, a.lo_, b.hi_, MPFR_RNDD);
  mpfr_sub(r.hi_, a.hi_, b.lo_, MPFR_RNDU);
  return r;
}

Interval operator*(const Interval& a, const Interval& b) {
  Precision p = join(a, b);
  Interval r(p);
  Scratch t(p);
  mpfr_srcptr as[2] = {a.lo_, a.hi_};
  mpfr_srcptr bs[2] = {b.lo_, b.hi_};
  bool first = true;
  for (auto x : as) {
    for (auto y : bs) {
      mpfr_mul(t.v, x, y, MPFR_RNDD);
      if (first || mpfr_less_p(t.v, r.lo_) != 0) mpfr_set(r.lo_, t.v, MPFR_RNDD);
      mpfr_mul(t.v, x, y, MPFR_RNDU);
      if (first || mpfr_greater_p(t.v, r.hi_) != 0) mpfr_set(r.hi_, t.v, MPFR_RNDU);
      first = false;
    }
  }
  return r;
}

Interval operator/(const Interval& a, const Interval& b) {
  require(!b.contains_zero(), ErrorKind::division_by_zero, "interval division by an enclosure of zero");
  Precision p = join(a, b);
  Interval r(p);
  Scratch t(p);
  mpfr_srcptr as[2] = {a.lo_, a.hi_};
  mpfr_srcptr bs[2] = {b.lo_, b.hi_};
  bool first = true;
  for (auto x : as) {
    for (auto y : bs) {
      mpfr_div(t.v, x, y, MPFR_RNDD);
      if (first || mpfr_less_p(t.v, r.lo_) != 0) mpfr_set(r.lo_, t.v, MPFR_RNDD);
      mpfr_div(t.v, x, y, MPFR_RNDU);
      if (first || mpfr_greater_p(t.v, r.hi_) != 0) mpfr_set(r.hi_, t.v, MPFR_RNDU);
      first = false;
    }
  }
  return r;
}

std::string Interval::mid_string(int digits) const {
  Interval m = midpoint();
  std::vector<char> buf(static_cast<std::size_t>(digits) + 64);
  mpfr_snprintf(buf.data(), buf.size(), "%.*RNe", digits - 1, m.lo());
  return std::string(buf.data());
}

std::string Interval::rad_string(int digits) const {
  mpq_class mid = parse_decimal_exact(mid_string(digits));
  mpq_class rad = std::max(mid - lo_q(), hi_q() - mid);
  Scratch r(64);
  mpfr_set_q(r.v, rad.get_mpq_t(), MPFR_RNDU);
  char buf[64];
  mpfr_snprintf(buf, sizeof buf, "%.3RUe", r.v);
  return std::string(buf);
}

std::string Interval::to_string(int digits) const { return mid_string(digits) + " +/- " + rad_string(digits); }

Interval sqr(const Interval& x) {
  Interval a = abs(x);
  Scratch lo(x.precision()), hi(x.precision());
  mpfr_sqr(lo.v, a.lo(), MPFR_RNDD);
  mpfr_sqr(hi.v, a.hi(), MPFR_RNDU);
  return Interval::from_mpfr(lo.v, hi.v, x.precision());
}

Interval sqrt(const Interval& x) {
  require(mpfr_sgn(x.hi()) >= 0, ErrorKind::internal_consistency, "sqrt of a negative enclosure");
  Scratch lo(x.precision()), hi(x.precision());
  if (mpfr_sgn(x.lo()) <= 0) mpfr_set_zero(lo.v, 1);
  else mpfr_sqrt(lo.v, x.lo(), MPFR_RNDD);
  mpfr_sqrt(hi.v, x.hi(), MPFR_RNDU);
  return Interval::from_mpfr(lo.v, hi.v, x.precision());
}

Interval abs(const Interval& x) {
  if (mpfr_sgn(x.lo()) >= 0) return x;
  if (mpfr_sgn(x.hi()) <= 0) return -x;
  Scratch lo(x.precision()), hi(x.precision());
  mpfr_set_zero(lo.v, 1);
  mpfr_neg(hi.v, x.lo(), MPFR_RNDU);
  mpfr_max(hi.v, hi.v, x.hi(), MPFR_RNDU);
  return Interval::from_mpfr(lo.v, hi.v, x.precision());
}

Interval log(const Interval& x) {
  require(x.is_positive(), ErrorKind::precision, "log of an enclosure not certified positive");
  Scratch lo(x.precision()), hi(x.precision());
  mpfr_log(lo.v, x.lo(), MPFR_RNDD);
  mpfr_log(hi.v, x.hi(), MPFR_RNDU);
  return Interval::from_mpfr(lo.v, hi.v, x.precision());
}

Interval exp(const Interval& x) {
  Scratch lo(x.precision()), hi(x.precision());
  mpfr_exp(lo.v, x.lo(), MPFR_RNDD);
  mpfr_exp(hi.v, x.hi(), MPFR_RNDU);
  return Interval::from_mpfr(lo.v, hi.v, x.precision());
}

Interval pow(const Interval& x, unsigned long n) {
  Interval result = Interval::point(1L, x.precision());
  Interval base = x;
  while (n > 0) {
    if (n & 1UL) result = result * base;
    n >>= 1UL;
    if (n > 0) base = sqr(base);
  }
  return result;
}

Interval max(const Interval& a, const Interval& b) {
  Precision p = join(a, b);
  Scratch lo(p), hi(p);
  mpfr_max(lo.v, a.lo(), b.lo(), MPFR_RNDD);
  mpfr_max(hi.v, a.hi(), b.hi(), MPFR_RNDU);
  return Interval::from_mpfr(lo.v, hi.v, p);
}

Interval min(const Interval& a, const Interval& b) {
  Precision p = join(a, b);
  Scratch lo(p), hi(p);
  mpfr_min(lo.v, a.lo(), b.lo(), MPFR_RNDD);
  mpfr_min(hi.v, a.hi(), b.hi(), MPFR_RNDU);
  return Interval::from_mpfr(lo.v, hi.v, p);
}

Interval intersect(const Interval& a, const Interval& b) {
  require(a.overlaps(b), ErrorKind::internal_consistency, "disjoint enclosures of the same value");
  Precision p = join(a, b);
  Scratch lo(p), hi(p);
  mpfr_max(lo.v, a.lo(), b.lo(), MPFR_RNDD);
  mpfr_min(hi.v, a.hi(), b.hi(), MPFR_RNDU);
  return Interval::from_mpfr(lo.v, hi.v, p);
}

mpq_class parse_decimal_exact(const std::string& text) {
  std::string mant = text;
  long exp10 = 0;
  auto e = text.find_first_of("eE");
  if (e != std::string::npos) {
    mant = text.substr(0, e);
    exp10 = std::stol(text.substr(e + 1));
  }
  bool neg = !mant.empty() && mant[0] == '-';
  if (neg || (!mant.empty() && mant[0] == '+')) mant = mant.substr(1);
  std::string digits;
  long frac = 0;
  bool seen_dot = false;
  for (char c : mant) {
    if (c == '.') {
      seen_dot = true;
      continue;
    }
    require(c >= '0' && c <= '9', ErrorKind::parse, "bad decimal: " + text);
    digits.push_back(c);
    if (seen_dot) ++frac;
  }
  require(!digits.empty(), ErrorKind::parse, "bad decimal: " + text);
  mpz_class num(digits, 10);
  long shift = exp10 - frac;
  mpz_class p10;
  mpz_ui_pow_ui(p10.get_mpz_t(), 10, static_cast<unsigned long>(shift < 0 ? -shift : shift));
  mpq_class q = shift >= 0 ? mpq_class(num * p10) : mpq_class(num, p10);
  q.canonicalize();
  return neg ? mpq_class(-q) : q;
}

ComplexBox ComplexBox::real(Interval r) {
  Interval zero(r.precision());
  return ComplexBox(std::move(r), std::move(zero));
}

bool ComplexBox::is_real_exact() const { return mpfr_zero_p(im.lo()) != 0 && mpfr_zero_p(im.hi()) != 0; }

ComplexBox operator+(const ComplexBox& a, const ComplexBox& b) { return {a.re + b.re, a.im + b.im}; }
ComplexBox operator-(const ComplexBox& a, const ComplexBox& b) { return {a.re - b.re, a.im - b.im}; }

ComplexBox operator*(const ComplexBox& a, const ComplexBox& b) {
  if (a.is_real_exact() && b.is_real_exact()) return ComplexBox::real(a.re * b.re);
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

ComplexBox operator*(const ComplexBox& a, const Interval& s) { return {a.re * s, a.im * s}; }

Interval abs_sqr(const ComplexBox& z) { return sqr(z.re) + sqr(z.im); }
Interval abs(const ComplexBox& z) {
  if (z.is_real_exact()) return abs(z.re);
  return sqrt(abs_sqr(z));
}

ComplexBox intersect(const ComplexBox& a, const ComplexBox& b) { return {intersect(a.re, b.re), intersect(a.im, b.im)}; }
bool overlaps(const ComplexBox& a, const ComplexBox& b) { return a.re.overlaps(b.re) && a.im.overlaps(b.im); }

}  // namespace cantrans::numeric
