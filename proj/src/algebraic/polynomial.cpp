#include "cantrans/algebraic/polynomial.hpp"

#include <algorithm>

#include "cantrans/error.hpp"

namespace cantrans::algebraic {

using numeric::ComplexBox;
using numeric::Interval;
using numeric::Precision;

Poly::Poly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) {
  for (auto& c : c_) c.canonicalize();
  trim();
}

Poly Poly::from_integers(const std::vector<Natural>& coeffs) {
  std::vector<Rational> c;
  c.reserve(coeffs.size());
  for (const auto& z : coeffs) c.emplace_back(z);
  return Poly(std::move(c));
}

Poly Poly::constant(const Rational& c) { return Poly(std::vector<Rational>{c}); }

Poly Poly::monomial(const Rational& c, std::size_t degree) {
  std::vector<Rational> v(degree + 1);
  v[degree] = c;
  return Poly(std::move(v));
}

void Poly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Poly Poly::derivative() const {
  if (c_.size() <= 1) return {};
  std::vector<Rational> d(c_.size() - 1);
  for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * static_cast<unsigned long>(i);
  return Poly(std::move(d));
}

Poly Poly::monic() const {
  require(!is_zero(), ErrorKind::invalid_polynomial, "zero polynomial has no monic form");
  return *this * Rational(1 / leading());
}

std::vector<Natural> Poly::primitive_integer() const {
  Natural den = 1;
  for (const auto& c : c_) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den_mpz_t());
  std::vector<Natural> out;
  Natural g = 0;
  for (const auto& c : c_) {
    Natural v = c.get_num() * (den / c.get_den());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
    out.push_back(v);
  }
  if (g == 0) return out;
  if (!out.empty() && out.back() < 0) g = -g;
  for (auto& v : out) v /= g;
  return out;
}

bool Poly::is_reciprocal() const {
  if (is_zero()) return false;
  const std::size_t d = c_.size() - 1;
  bool same = true;
  bool anti = true;
  for (std::size_t i = 0; i <= d; ++i) {
    same = same && c_[i] == c_[d - i];
    anti = anti && c_[i] == -c_[d - i];
  }
  return same || anti;
}

Rational Poly::eval(const Rational& x) const {
  Rational acc = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Interval Poly::eval(const Interval& x, Precision prec) const {
  Interval acc = Interval::point(0L, prec);
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + Interval::enclose(*it, prec);
  return acc;
}

ComplexBox Poly::eval(const ComplexBox& z, Precision prec) const {
  ComplexBox acc(Interval::point(0L, prec), Interval::point(0L, prec));
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
    acc = acc * z;
    acc.re = acc.re + Interval::enclose(*it, prec);
  }
  return acc;
}

Poly operator+(const Poly& a, const Poly& b) {
  std::vector<Rational> c(std::max(a.c_.size(), b.c_.size()));
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coeff(i) + b.coeff(i);
  return Poly(std::move(c));
}

Poly operator-(const Poly& a, const Poly& b) {
  std::vector<Rational> c(std::max(a.c_.size(), b.c_.size()));
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coeff(i) - b.coeff(i);
  return Poly(std::move(c));
}

Poly operator*(const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Rational> c(a.c_.size() + b.c_.size() - 1);
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    if (a.c_[i] == 0) continue;
    for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
  }
  return Poly(std::move(c));
}

Poly operator*(const Poly& a, const Rational& s) {
  std::vector<Rational> c = a.c_;
  for (auto& x : c) x *= s;
  return Poly(std::move(c));
}

Poly Poly::operator-() const { return *this * Rational(-1); }

std::string Poly::to_string() const {
  if (is_zero()) return "0";
  std::string out;
  for (std::size_t i = c_.size(); i-- > 0;) {
    if (c_[i] == 0) continue;
    Rational c = c_[i];
    if (!out.empty()) {
      out += c < 0 ? " - " : " + ";
      c = abs(c);
    } else if (c < 0) {
      out += "-";
      c = abs(c);
    }
    const bool unit = c == 1 && i > 0;
    if (!unit) out += cantrans::to_string(c);
    if (i > 0) out += unit ? "x" : "*x";
    if (i > 1) out += "^" + std::to_string(i);
  }
  return out;
}

std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
  require(!b.is_zero(), ErrorKind::division_by_zero, "polynomial division by zero");
  std::vector<Rational> r = a.coeffs();
  const int db = b.degree();
  if (a.degree() < db) return {Poly{}, a};
  std::vector<Rational> q(static_cast<std::size_t>(a.degree() - db + 1));
  const Rational lead = b.leading();
  for (int i = a.degree(); i >= db; --i) {
    const Rational f = r[static_cast<std::size_t>(i)] / lead;
    q[static_cast<std::size_t>(i - db)] = f;
    if (f == 0) continue;
    for (int j = 0; j <= db; ++j) r[static_cast<std::size_t>(i - db + j)] -= f * b.coeffs()[static_cast<std::size_t>(j)];
  }
  return {Poly(std::move(q)), Poly(std::move(r))};
}

Poly mod(const Poly& a, const Poly& b) { return divmod(a, b).second; }

Poly gcd(const Poly& a, const Poly& b) {
  Poly x = a;
  Poly y = b;
  while (!y.is_zero()) {
    Poly r = mod(x, y);
    x = std::move(y);
    y = std::move(r);
  }
  return x.is_zero() ? x : x.monic();
}

ExtendedGcd extended_gcd(const Poly& a, const Poly& b) {
  Poly r0 = a, r1 = b;
  Poly s0 = Poly::constant(1), s1;
  Poly t0, t1 = Poly::constant(1);
  while (!r1.is_zero()) {
    auto [q, r] = divmod(r0, r1);
    Poly s2 = s0 - q * s1;
    Poly t2 = t0 - q * t1;
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (r0.is_zero()) return {r0, s0, t0};
  const Rational inv = 1 / r0.leading();
  return {r0 * inv, s0 * inv, t0 * inv};
}

bool is_square_free(const Poly& f) {
  require(!f.is_zero(), ErrorKind::invalid_polynomial, "zero polynomial");
  if (f.degree() <= 1) return true;
  return gcd(f, f.derivative()).degree() == 0;
}

SturmSequence::SturmSequence(const Poly& f) {
  require(!f.is_zero(), ErrorKind::invalid_polynomial, "Sturm chain of the zero polynomial");
  chain_.push_back(f);
  chain_.push_back(f.derivative());
  while (!chain_.back().is_zero()) {
    Poly r = mod(chain_[chain_.size() - 2], chain_.back());
    chain_.push_back(-r);
  }
  chain_.pop_back();
}

std::size_t SturmSequence::variations_at(const Rational& x) const {
  std::size_t changes = 0;
  int last = 0;
  for (const auto& p : chain_) {
    const int s = sgn(p.eval(x));
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

std::size_t SturmSequence::variations_at_infinity(int sign) const {
  std::size_t changes = 0;
  int last = 0;
  for (const auto& p : chain_) {
    int s = sgn(p.leading());
    if (sign < 0 && p.degree() % 2 == 1) s = -s;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

std::size_t SturmSequence::count(const Rational& lo, const Rational& hi) const {
  if (hi <= lo) return 0;
  return variations_at(lo) - variations_at(hi);
}

std::size_t SturmSequence::count_closed(const Rational& lo, const Rational& hi) const {
  if (hi < lo) return 0;
  return count(lo, hi) + (chain_.front().eval(lo) == 0 ? 1 : 0);
}

std::size_t SturmSequence::count_real() const { return variations_at_infinity(-1) - variations_at_infinity(1); }

Rational root_bound(const Poly& f) {
  require(f.degree() >= 1, ErrorKind::invalid_polynomial, "root bound needs a nonconstant polynomial");
  Rational m = 0;
  for (int i = 0; i < f.degree(); ++i) m = std::max<Rational>(m, abs(f.coeffs()[static_cast<std::size_t>(i)] / f.leading()));
  return m + 1;
}

}  // namespace cantrans::algebraic
