#include "cantrans/algebraic/number.hpp"

#include "cantrans/error.hpp"

namespace cantrans::algebraic {

using numeric::ComplexBox;
using numeric::Interval;
using numeric::Precision;

namespace {

Natural json_integer(const nlohmann::json& v) {
  if (v.is_number_integer()) return Natural(v.get<long>());
  if (v.is_string()) {
    const std::string& s = v.get_ref<const std::string&>();
    Natural out;
    require(out.set_str(s, 10) == 0, ErrorKind::parse, "not an integer: " + s);
    return out;
  }
  fail(ErrorKind::parse, "expected an integer, got " + v.dump());
}

Rational json_rational(const nlohmann::json& v) {
  if (v.is_number_integer()) return Rational(v.get<long>());
  if (v.is_string()) return parse_rational(v.get<std::string>());
  fail(ErrorKind::parse, "expected a rational as an integer or \"p/q\" string, got " + v.dump());
}

Natural floor_q(const Rational& q) {
  Natural out;
  mpz_fdiv_q(out.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return out;
}

}  // namespace

AlgebraicNumber AlgebraicNumber::make(const std::vector<Natural>& coeffs, const RootSelector& selector) {
  Poly f = Poly::from_integers(coeffs);
  require(f.degree() >= 1, ErrorKind::invalid_polynomial, "minimal polynomial must be nonconstant");
  auto roots = std::make_shared<const RootSet>(Poly::from_integers(f.primitive_integer()));
  if (const auto* idx = std::get_if<MagnitudeIndex>(&selector)) {
    require(idx->index < roots->degree(), ErrorKind::isolation,
            "root index " + std::to_string(idx->index) + " out of range for degree " + std::to_string(roots->degree()));
    return AlgebraicNumber(std::move(roots), idx->index);
  }
  const auto& box = std::get<RealBox>(selector);
  require(box.lo <= box.hi, ErrorKind::isolation, "selector box has lo > hi");
  const std::size_t inside = SturmSequence(roots->poly()).count_closed(box.lo, box.hi);
  require(inside == 1, ErrorKind::isolation,
          "selector box [" + to_string(box.lo) + ", " + to_string(box.hi) + "] contains " + std::to_string(inside) +
              " real roots of " + roots->poly().to_string());
  for (Precision level = min_ladder_precision; level <= max_ladder_precision; level *= 2) {
    const auto encl = roots->enclosures(level);
    const Interval target = Interval::hull(box.lo, box.hi, level + 32);
    std::size_t hits = 0;
    std::size_t found = 0;
    for (std::size_t i = 0; i < encl.size(); ++i) {
      if (roots->is_real(i) && encl[i].re.overlaps(target)) {
        ++hits;
        found = i;
      }
    }
    if (hits == 1) return AlgebraicNumber(std::move(roots), found);
  }
  fail(ErrorKind::isolation, "could not match the selector box to a certified root");
}

AlgebraicNumber AlgebraicNumber::rational(const Rational& r) {
  Rational c = r;
  c.canonicalize();
  return make({-c.get_num(), c.get_den()}, MagnitudeIndex{0});
}

bool AlgebraicNumber::is_algebraic_integer() const {
  const auto c = integer_coeffs();
  return c.back() == 1;
}

std::optional<Rational> AlgebraicNumber::as_rational() const {
  if (degree() != 1) return std::nullopt;
  return Rational(-min_poly().coeff(0) / min_poly().coeff(1));
}

ComplexBox AlgebraicNumber::enclosure(Precision bits) const { return roots_->enclosures(bits)[index_]; }

RealBox AlgebraicNumber::isolating_interval(Precision bits) const {
  require(is_real(), ErrorKind::invalid_parameters, "isolating interval requested for a non-real root");
  if (auto r = as_rational()) return {*r, *r};
  const ComplexBox b = enclosure(bits);
  return {b.re.lo_q(), b.re.hi_q()};
}

nlohmann::json AlgebraicNumber::to_json() const {
  nlohmann::json coeffs = nlohmann::json::array();
  for (const auto& c : integer_coeffs()) coeffs.push_back(to_decimal(c));
  nlohmann::json root;
  if (is_real()) {
    const RealBox b = isolating_interval(min_ladder_precision);
    root["box"] = {to_string(b.lo), to_string(b.hi)};
  } else {
    root["index_by_magnitude"] = index_;
  }
  return {{"min_poly", coeffs}, {"root", root}};
}

AlgebraicNumber AlgebraicNumber::from_json(const nlohmann::json& j) {
  try {
    std::vector<Natural> coeffs;
    for (const auto& c : j.at("min_poly")) coeffs.push_back(json_integer(c));
    const auto& root = j.contains("root") ? j.at("root") : nlohmann::json::object();
    if (root.contains("box")) {
      const auto& b = root.at("box");
      require(b.is_array() && b.size() == 2, ErrorKind::parse, "root box must be [lo, hi]");
      return make(coeffs, RealBox{json_rational(b[0]), json_rational(b[1])});
    }
    if (root.contains("index_by_magnitude")) {
      return make(coeffs, MagnitudeIndex{root.at("index_by_magnitude").get<std::size_t>()});
    }
    require(coeffs.size() == 2, ErrorKind::parse, "root selector required unless the polynomial is linear");
    return make(coeffs, MagnitudeIndex{0});
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::parse, std::string("algebraic number descriptor: ") + e.what());
  }
}

NumberField::NumberField(AlgebraicNumber generator) : gen_(std::move(generator)), modulus_(gen_.min_poly().monic()) {}

std::shared_ptr<const NumberField> NumberField::make(AlgebraicNumber generator) {
  return std::shared_ptr<const NumberField>(new NumberField(std::move(generator)));
}

FieldElement NumberField::element(std::vector<Rational> coords) const {
  return FieldElement(shared_from_this(), std::move(coords));
}

FieldElement NumberField::from_poly(const Poly& p) const { return element(p.coeffs()); }
FieldElement NumberField::from_rational(const Rational& r) const { return element({r}); }
FieldElement NumberField::zero() const { return element({}); }
FieldElement NumberField::one() const { return element({Rational(1)}); }
FieldElement NumberField::gen() const { return from_poly(Poly::monomial(1, 1)); }

FieldElement::FieldElement(std::shared_ptr<const NumberField> field, std::vector<Rational> coords)
    : field_(std::move(field)) {
  const std::size_t d = field_->degree();
  Poly p(std::move(coords));
  if (p.degree() >= static_cast<int>(d)) p = mod(p, field_->modulus());
  coords_ = p.coeffs();
  coords_.resize(d);
}

bool FieldElement::is_zero() const {
  return std::all_of(coords_.begin(), coords_.end(), [](const Rational& c) { return c == 0; });
}

std::optional<Rational> FieldElement::as_rational() const {
  for (std::size_t i = 1; i < coords_.size(); ++i) {
    if (coords_[i] != 0) return std::nullopt;
  }
  return coords_.empty() ? Rational(0) : coords_[0];
}

namespace {

void same_field(const FieldElement& a, const FieldElement& b) {
  require(a.field().same(b.field()), ErrorKind::invalid_parameters, "field elements from different fields");
}

}  // namespace

FieldElement FieldElement::operator-() const { return *this * Rational(-1); }

FieldElement operator+(const FieldElement& a, const FieldElement& b) {
  same_field(a, b);
  std::vector<Rational> c(a.coords_);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] += b.coords_[i];
  return FieldElement(a.field_, std::move(c));
}

FieldElement operator-(const FieldElement& a, const FieldElement& b) {
  same_field(a, b);
  std::vector<Rational> c(a.coords_);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] -= b.coords_[i];
  return FieldElement(a.field_, std::move(c));
}

FieldElement operator*(const FieldElement& a, const FieldElement& b) {
  same_field(a, b);
  return FieldElement(a.field_, mod(a.as_poly() * b.as_poly(), a.field_->modulus()).coeffs());
}

FieldElement operator/(const FieldElement& a, const FieldElement& b) { return a * b.inverse(); }

FieldElement operator+(const FieldElement& a, const Rational& r) { return a + a.field_->from_rational(r); }
FieldElement operator-(const FieldElement& a, const Rational& r) { return a - a.field_->from_rational(r); }

FieldElement operator*(const FieldElement& a, const Rational& r) {
  std::vector<Rational> c(a.coords_);
  for (auto& x : c) x *= r;
  return FieldElement(a.field_, std::move(c));
}

bool operator==(const FieldElement& a, const FieldElement& b) {
  same_field(a, b);
  return a.coords_ == b.coords_;
}

FieldElement FieldElement::inverse() const {
  require(!is_zero(), ErrorKind::division_by_zero, "inverse of zero in the number field");
  if (auto r = as_rational()) return field_->from_rational(1 / *r);
  const ExtendedGcd e = extended_gcd(as_poly(), field_->modulus());
  require(e.g.degree() == 0, ErrorKind::invalid_polynomial,
          "element shares a factor with " + field_->modulus().to_string() + "; the polynomial is reducible");
  return FieldElement(field_, mod(e.s, field_->modulus()).coeffs());
}

FieldElement FieldElement::pow(long n) const {
  FieldElement base = n < 0 ? inverse() : *this;
  unsigned long e = n < 0 ? static_cast<unsigned long>(-n) : static_cast<unsigned long>(n);
  FieldElement acc = field_->one();
  while (e > 0) {
    if (e & 1) acc = acc * base;
    base = base * base;
    e >>= 1;
  }
  return acc;
}

ComplexBox FieldElement::embed(std::size_t root_index, Precision bits) const {
  require(bits >= 16, ErrorKind::invalid_parameters, "embedding precision must be at least 16 bits");
  if (auto r = as_rational()) {
    return ComplexBox(Interval::enclose(*r, bits + 8), Interval::point(0L, bits + 8));
  }
  const Poly p = as_poly();
  const long e = -static_cast<long>(bits);
  for (Precision level = ladder_level(std::min<Precision>(bits + 16, max_ladder_precision));
       level <= max_ladder_precision; level *= 2) {
    const ComplexBox root = field_->generator().roots().enclosures(level)[root_index];
    ComplexBox v = p.eval(root, level + 32);
    if (v.re.width_below_pow2(e) && v.im.width_below_pow2(e)) return v;
  }
  fail(ErrorKind::precision, "embedding of " + to_string() + " did not reach " + std::to_string(bits) + " bits");
}

ComplexBox FieldElement::value(Precision bits) const { return embed(field_->generator().index(), bits); }

int FieldElement::sign() const {
  if (auto r = as_rational()) return sgn(*r);
  require(field_->generator().is_real(), ErrorKind::invalid_parameters, "sign needs a real distinguished embedding");
  for (Precision bits = min_ladder_precision; bits <= max_ladder_precision; bits *= 2) {
    const ComplexBox v = value(bits);
    if (v.re.is_positive()) return 1;
    if (v.re.is_negative()) return -1;
  }
  fail(ErrorKind::precision, "sign of " + to_string() + " undecided at the precision cap");
}

Natural FieldElement::floor() const {
  if (auto r = as_rational()) return floor_q(*r);
  require(field_->generator().is_real(), ErrorKind::invalid_parameters, "floor needs a real distinguished embedding");
  for (Precision bits = min_ladder_precision; bits <= max_ladder_precision; bits *= 2) {
    const ComplexBox v = value(bits);
    const Natural lo = floor_q(v.re.lo_q());
    const Natural hi = floor_q(v.re.hi_q());
    if (lo == hi) return lo;
    // The enclosure straddles the integer hi; decide equality exactly.
    if (hi == lo + 1 && (*this - Rational(hi)).is_zero()) return hi;
  }
  fail(ErrorKind::precision, "floor of " + to_string() + " undecided at the precision cap");
}

Natural FieldElement::ceil() const {
  Natural f = floor();
  return (*this - Rational(f)).is_zero() ? f : Natural(f + 1);
}

std::string FieldElement::key() const {
  std::string out;
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (i) out += ',';
    out += cantrans::to_string(coords_[i]);
  }
  return out;
}

std::string FieldElement::to_string() const { return as_poly().to_string(); }

nlohmann::json FieldElement::to_json() const {
  nlohmann::json c = nlohmann::json::array();
  for (const auto& x : coords_) c.push_back(cantrans::to_string(x));
  return {{"coords", c}};
}

FieldElement FieldElement::from_json(std::shared_ptr<const NumberField> field, const nlohmann::json& j) {
  try {
    std::vector<Rational> coords;
    const auto& c = j.is_object() ? j.at("coords") : j;
    if (c.is_array()) {
      for (const auto& x : c) coords.push_back(json_rational(x));
    } else {
      coords.push_back(json_rational(c));
    }
    require(coords.size() <= field->degree(), ErrorKind::parse, "more coordinates than the field degree");
    return field->element(std::move(coords));
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::parse, std::string("field element descriptor: ") + e.what());
  }
}

}  // namespace cantrans::algebraic
