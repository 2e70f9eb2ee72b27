#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "cantrans/algebraic/number.hpp"
#include "cantrans/natural.hpp"
#include "cantrans/numeric/interval.hpp"

namespace cantrans::cantor {

using algebraic::FieldElement;
using algebraic::NumberField;
using numeric::Interval;
using numeric::Precision;
using Digit = std::uint64_t;

// Periodic Cantor base beta_1, ..., beta_p, extended by beta_{k+p} = beta_k.
// Exact bases live in Q(delta) with delta = beta_1 ... beta_p equal to the
// field generator; numeric bases carry certified enclosures only and every
// result derived from them is marked heuristic.
class CantorBase {
 public:
  static CantorBase exact(std::vector<FieldElement> entries);
  static CantorBase rational(const std::vector<Rational>& entries);
  static CantorBase numeric(std::vector<Interval> entries);
  static CantorBase from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  std::size_t period() const { return p_; }
  bool is_exact() const { return field_ != nullptr; }
  bool heuristic() const { return !is_exact(); }
  const std::shared_ptr<const NumberField>& field() const { return field_; }

  // beta_{k+1} for k >= 0 (0-based index into the periodic extension).
  const FieldElement& entry(std::size_t k) const;
  Interval entry_enclosure(std::size_t k, Precision bits) const;
  const FieldElement& delta() const;
  const FieldElement& beta_min() const;
  Interval delta_enclosure(Precision bits) const;
  Interval beta_min_enclosure(Precision bits) const;
  // ceil(max beta) - 1
  Digit alphabet_bound() const { return alphabet_bound_; }

  // Sum over j >= 1 of prod_{i=n+1}^{n+j} beta_i^{-1}, bounded uniformly by
  // delta (beta_min^p - 1) / (beta_min^p (delta - 1) (beta_min - 1)).
  FieldElement tail_constant() const;
  Interval tail_constant_enclosure(Precision bits) const;

  std::string to_string() const;

 private:
  CantorBase() = default;
  void finish();

  std::size_t p_ = 0;
  std::shared_ptr<const NumberField> field_;
  std::vector<FieldElement> exact_;
  std::vector<Interval> approx_;
  std::optional<FieldElement> delta_;
  std::optional<FieldElement> beta_min_;
  std::size_t beta_min_index_ = 0;
  Digit alphabet_bound_ = 0;
};

struct Step {
  Digit digit;
  FieldElement next;
};
// digit = floor(beta z), next = beta z - digit. Requires 0 <= z < 1.
Step greedy_step(const FieldElement& z, const FieldElement& beta);

struct NumericStep {
  Digit digit;
  Interval next;
};
// Throws boundary_undecidable when beta z cannot be separated from an integer.
NumericStep greedy_step(const Interval& z, const Interval& beta);

// Lazily produces the greedy digits of x in [0, 1).
class GreedyExpander {
 public:
  GreedyExpander(const CantorBase& base, FieldElement x);

  Digit next();
  std::size_t position() const { return k_; }  // digits produced so far
  const FieldElement& state() const { return z_; }  // tau^k(x)

 private:
  const CantorBase* base_;
  FieldElement z_;
  std::size_t k_ = 0;
};

struct Expansion {
  std::vector<Digit> digits;
  std::optional<FieldElement> remainder;  // tau^n(x) on the exact path
  bool heuristic = false;
};

Expansion expand(const FieldElement& x, const CantorBase& base, std::size_t n);
Expansion expand(const Rational& x, const CantorBase& base, std::size_t n);
// Numeric path; works on exact bases too but then uses enclosures only.
Expansion expand_numeric(const Interval& x, const CantorBase& base, std::size_t n, Precision bits);

// x as an element of the base's field.
FieldElement lift(const CantorBase& base, const Rational& x);

// max_digit * prod_{i<=n} beta_i^{-1} * tail_constant(), exactly.
FieldElement tail_bound(const CantorBase& base, std::size_t n, Digit max_digit);
Interval tail_bound_enclosure(const CantorBase& base, std::size_t n, Digit max_digit, Precision bits);
// Smallest n with tail_bound(n) < 2^-bits.
std::size_t terms_for_tail(const CantorBase& base, Digit max_digit, Precision bits);

struct ValueEnclosure {
  Interval value;    // partial sum plus [0, tail]
  Interval partial;  // sum over the given digits only
  Interval tail;     // [0, tail bound]
  bool heuristic = false;
};
// Sum of a_k prod_{i<=k} beta_i^{-1}. Digits after the prefix are assumed to
// lie in [0, tail_max]; tail_max = 0 means the sequence ends with zeros.
ValueEnclosure val(std::span<const Digit> digits, const CantorBase& base, Precision bits, Digit tail_max);
// Exact value of a finite digit word (zeros afterwards); exact bases only.
FieldElement val_exact(std::span<const Digit> digits, const CantorBase& base);

class PeriodicityCertificate {
 public:
  // Digit-minimal preperiod and period of the digit sequence.
  std::size_t preperiod = 0;
  std::size_t period = 0;
  // tau^j(x) == tau^{j+L}(x) with j = orbit_preperiod, L = orbit_period.
  std::size_t orbit_preperiod = 0;
  std::size_t orbit_period = 0;
  std::size_t position_mod_p = 0;
  std::optional<FieldElement> state;
  std::vector<Digit> digits;  // a_1 .. a_{j+L}

  // a_n for n >= 1 from the stored cycle.
  Digit digit(std::size_t n) const;
  nlohmann::json to_json(const CantorBase& base, const FieldElement& x) const;
};

// Hashes (k mod p, tau^k(x)); returns nullopt when max_steps run out.
std::optional<PeriodicityCertificate> detect_periodicity(const FieldElement& x, const CantorBase& base,
                                                         std::size_t max_steps);

struct CertificateCheck {
  bool ok = false;
  std::string detail;
};
// Recomputes the two orbit states and compares the certificate digits with a
// fresh expansion through max(preperiod, orbit_preperiod) + 3 max(period, orbit_period).
CertificateCheck verify_certificate(const PeriodicityCertificate& cert, const FieldElement& x, const CantorBase& base);
CertificateCheck verify_certificate_json(const nlohmann::json& j);

struct AdmissibilityBound {
  std::optional<FieldElement> exact;  // s(beta_min^p) / s(delta) * (beta_min - 1)
  Interval enclosure;
  Digit digit_bound = 0;  // floor of the threshold
  bool heuristic = false;
};
AdmissibilityBound admissibility_bound(const CantorBase& base, Precision bits = 128);

// Non-constant words over {0, .., floor(threshold)} are admissible.
struct AdmissibilityVerdict {
  bool certified = false;
  std::string reason;
};
AdmissibilityVerdict certify_admissible(std::span<const Digit> digits, const CantorBase& base);

struct ShiftCheck {
  bool ok = false;                 // every shift certified below 1
  std::optional<std::size_t> violation;  // first n with a certified value >= 1
  bool heuristic = false;
};
// Checks val_{B^(n)}(sigma^n a) < 1 for n < horizon by the backward recursion
// V_n = (a_{n+1} + V_{n+1}) / beta_{n+1}, starting from V_L in [0, tail_max C].
// Throws boundary_undecidable if some V_n cannot be separated from 1.
ShiftCheck shift_value_check(std::span<const Digit> digits, const CantorBase& base, std::size_t horizon,
                             std::optional<Digit> tail_max = std::nullopt, Precision bits = 128);

}  // namespace cantrans::cantor
