#pragma once

#include <memory>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "json.hpp"

#include "cantrans/algebraic/polynomial.hpp"
#include "cantrans/algebraic/roots.hpp"
#include "cantrans/natural.hpp"
#include "cantrans/numeric/interval.hpp"

namespace cantrans::algebraic {

struct RealBox {
  Rational lo;
  Rational hi;
};
struct MagnitudeIndex {
  std::size_t index = 0;  // 0 is the root of largest modulus
};
using RootSelector = std::variant<RealBox, MagnitudeIndex>;

// One root of a primitive, square-free integer polynomial. The polynomial is
// not checked for irreducibility.
class AlgebraicNumber {
 public:
  static AlgebraicNumber make(const std::vector<Natural>& coeffs, const RootSelector& selector);
  static AlgebraicNumber rational(const Rational& r);

  const Poly& min_poly() const { return roots_->poly(); }
  std::vector<Natural> integer_coeffs() const { return min_poly().primitive_integer(); }
  std::size_t degree() const { return roots_->degree(); }
  // Position of the selected root in the canonical root order.
  std::size_t index() const { return index_; }
  const RootSet& roots() const { return *roots_; }
  std::shared_ptr<const RootSet> shared_roots() const { return roots_; }

  bool is_real() const { return roots_->is_real(index_); }
  bool is_algebraic_integer() const;
  std::optional<Rational> as_rational() const;

  // Enclosure with both widths below 2^-bits.
  numeric::ComplexBox enclosure(numeric::Precision bits) const;
  // Real roots only: rational endpoints, width below 2^-bits.
  RealBox isolating_interval(numeric::Precision bits) const;

  nlohmann::json to_json() const;
  static AlgebraicNumber from_json(const nlohmann::json& j);

 private:
  AlgebraicNumber(std::shared_ptr<const RootSet> roots, std::size_t index) : roots_(std::move(roots)), index_(index) {}

  std::shared_ptr<const RootSet> roots_;
  std::size_t index_;
};

inline AlgebraicNumber make_algebraic(const std::vector<Natural>& coeffs, const RootSelector& selector) {
  return AlgebraicNumber::make(coeffs, selector);
}

class FieldElement;

// Q(delta) represented by the power basis 1, delta, ..., delta^(d-1).
class NumberField : public std::enable_shared_from_this<NumberField> {
 public:
  static std::shared_ptr<const NumberField> make(AlgebraicNumber generator);

  const AlgebraicNumber& generator() const { return gen_; }
  std::size_t degree() const { return gen_.degree(); }
  const Poly& modulus() const { return modulus_; }  // monic min_poly

  FieldElement element(std::vector<Rational> coords) const;
  FieldElement from_poly(const Poly& p) const;
  FieldElement from_rational(const Rational& r) const;
  FieldElement zero() const;
  FieldElement one() const;
  FieldElement gen() const;

  bool same(const NumberField& other) const { return this == &other; }

 private:
  explicit NumberField(AlgebraicNumber generator);
  AlgebraicNumber gen_;
  Poly modulus_;
};

class FieldElement {
 public:
  FieldElement(std::shared_ptr<const NumberField> field, std::vector<Rational> coords);

  const NumberField& field() const { return *field_; }
  std::shared_ptr<const NumberField> shared_field() const { return field_; }
  const std::vector<Rational>& coords() const { return coords_; }
  Poly as_poly() const { return Poly(coords_); }

  bool is_zero() const;
  std::optional<Rational> as_rational() const;

  FieldElement operator-() const;
  friend FieldElement operator+(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator-(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator*(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator/(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator+(const FieldElement& a, const Rational& r);
  friend FieldElement operator-(const FieldElement& a, const Rational& r);
  friend FieldElement operator*(const FieldElement& a, const Rational& r);
  friend bool operator==(const FieldElement& a, const FieldElement& b);
  friend bool operator!=(const FieldElement& a, const FieldElement& b) { return !(a == b); }

  // Throws division_by_zero for zero; a failed inversion of a nonzero
  // element means the defining polynomial was reducible.
  FieldElement inverse() const;
  FieldElement pow(long n) const;

  // Image under the embedding that sends delta to root `root_index`, with
  // both widths below 2^-bits.
  numeric::ComplexBox embed(std::size_t root_index, numeric::Precision bits) const;
  // Image under the distinguished (selected-root) embedding.
  numeric::ComplexBox value(numeric::Precision bits) const;

  // Exact sign and floor at the distinguished place, which must be real.
  int sign() const;
  int compare(const Rational& r) const { return (*this - r).sign(); }
  int compare(const FieldElement& other) const { return (*this - other).sign(); }
  Natural floor() const;
  Natural ceil() const;

  // Canonical text key: coordinates joined by commas.
  std::string key() const;
  std::string to_string() const;
  nlohmann::json to_json() const;
  static FieldElement from_json(std::shared_ptr<const NumberField> field, const nlohmann::json& j);

 private:
  std::shared_ptr<const NumberField> field_;
  std::vector<Rational> coords_;
};

}  // namespace cantrans::algebraic
