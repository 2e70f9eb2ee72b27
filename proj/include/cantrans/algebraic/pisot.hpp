#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "cantrans/algebraic/number.hpp"
#include "cantrans/numeric/interval.hpp"

namespace cantrans::algebraic {

enum class PisotClass { pisot, salem, neither, undecided };
std::string_view to_string(PisotClass c) noexcept;

struct PisotReport {
  PisotClass classification = PisotClass::undecided;
  std::string reason;
  // Moduli of every root in canonical order; `selected` marks delta itself.
  std::vector<numeric::Interval> conjugate_moduli;
  std::size_t selected = 0;
  numeric::Precision precision = 0;

  nlohmann::json to_json() const;
};

// Salem detection is structural: a reciprocal polynomial of degree >= 4 with
// exactly one conjugate certified inside the unit disc and every other
// conjugate modulus still straddling 1 after `salem_budget` bits.
PisotReport classify_pisot_salem(const AlgebraicNumber& delta, numeric::Precision cap = max_ladder_precision,
                                 numeric::Precision salem_budget = 512);

}  // namespace cantrans::algebraic
