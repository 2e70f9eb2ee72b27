#include "cantrans/algebraic/pisot.hpp"

#include "cantrans/error.hpp"

namespace cantrans::algebraic {

using numeric::Interval;
using numeric::Precision;

std::string_view to_string(PisotClass c) noexcept {
  switch (c) {
    case PisotClass::pisot: return "Pisot";
    case PisotClass::salem: return "Salem (structural)";
    case PisotClass::neither: return "neither";
    case PisotClass::undecided: return "undecided-at-precision";
  }
  return "?";
}

nlohmann::json PisotReport::to_json() const {
  nlohmann::json moduli = nlohmann::json::array();
  for (std::size_t i = 0; i < conjugate_moduli.size(); ++i) {
    moduli.push_back({{"index", i},
                      {"selected", i == selected},
                      {"mid", conjugate_moduli[i].mid_string(30)},
                      {"rad", conjugate_moduli[i].rad_string(30)}});
  }
  return {{"classification", std::string(to_string(classification))},
          {"reason", reason},
          {"conjugate_moduli", moduli},
          {"precision", precision}};
}

namespace {

enum class Side { below, above, straddle };

Side side_of_one(const Interval& m) {
  if (m.certainly_less(Rational(1))) return Side::below;
  if (m.certainly_greater(Rational(1))) return Side::above;
  return Side::straddle;
}

}  // namespace

PisotReport classify_pisot_salem(const AlgebraicNumber& delta, Precision cap, Precision salem_budget) {
  PisotReport rep;
  rep.selected = delta.index();
  const std::size_t d = delta.degree();
  auto record = [&](Precision level) {
    rep.precision = level;
    rep.conjugate_moduli.clear();
    for (const auto& b : delta.roots().enclosures(level)) rep.conjugate_moduli.push_back(abs(b));
  };
  record(min_ladder_precision);

  if (!delta.is_real()) {
    rep.classification = PisotClass::neither;
    rep.reason = "selected root is not real";
    return rep;
  }
  Side self = Side::straddle;
  for (Precision level = min_ladder_precision; level <= cap && self == Side::straddle; level *= 2) {
    const Interval re = delta.enclosure(level).re;
    self = re.certainly_greater(Rational(1)) ? Side::above : re.certainly_less(Rational(1)) ? Side::below : Side::straddle;
    record(level);
  }
  if (self == Side::straddle) {
    if (auto r = delta.as_rational(); r && *r == 1) {
      self = Side::below;
    } else {
      rep.classification = PisotClass::undecided;
      rep.reason = "could not separate the selected root from 1";
      return rep;
    }
  }
  if (self == Side::below) {
    rep.classification = PisotClass::neither;
    rep.reason = "selected root is not greater than 1";
    return rep;
  }
  if (!delta.is_algebraic_integer()) {
    rep.classification = PisotClass::neither;
    rep.reason = "not an algebraic integer (leading coefficient " + to_decimal(delta.integer_coeffs().back()) + ")";
    return rep;
  }
  if (d == 1) {
    rep.classification = PisotClass::pisot;
    rep.reason = "rational integer greater than 1";
    return rep;
  }

  const bool salem_shape = d >= 4 && delta.min_poly().is_reciprocal();
  std::vector<Side> sides(d, Side::straddle);
  for (Precision level = min_ladder_precision; level <= cap; level *= 2) {
    record(level);
    bool pending = false;
    for (std::size_t i = 0; i < d; ++i) {
      if (i == delta.index() || sides[i] != Side::straddle) continue;
      sides[i] = side_of_one(rep.conjugate_moduli[i]);
      if (sides[i] == Side::above) {
        rep.classification = PisotClass::neither;
        rep.reason = "conjugate " + std::to_string(i) + " has modulus certified greater than 1";
        return rep;
      }
      pending = pending || sides[i] == Side::straddle;
    }
    if (!pending) {
      rep.classification = PisotClass::pisot;
      rep.reason = "all other conjugates certified inside the unit disc";
      return rep;
    }
    if (salem_shape && level >= salem_budget) break;
  }
  std::size_t below = 0;
  std::size_t straddle = 0;
  for (std::size_t i = 0; i < d; ++i) {
    if (i == delta.index()) continue;
    below += sides[i] == Side::below;
    straddle += sides[i] == Side::straddle;
  }
  if (salem_shape && below == 1 && straddle == d - 2) {
    rep.classification = PisotClass::salem;
    rep.reason = "reciprocal polynomial; one conjugate inside the unit disc, the rest not separable from the unit circle";
    return rep;
  }
  rep.classification = PisotClass::undecided;
  rep.reason = std::to_string(straddle) + " conjugate moduli not separated from 1 at " + std::to_string(rep.precision) +
               " bits";
  return rep;
}

}  // namespace cantrans::algebraic
