#include "cantrans/error.hpp"

namespace cantrans {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_base: return "invalid-base";
    case ErrorKind::undefined_valuation: return "undefined-valuation";
    case ErrorKind::invalid_prime: return "invalid-prime";
    case ErrorKind::configuration: return "configuration";
    case ErrorKind::oracle_scale: return "oracle-scale";
    case ErrorKind::insufficient_data: return "insufficient-data";
    case ErrorKind::internal_consistency: return "internal-consistency";
    case ErrorKind::invalid_polynomial: return "invalid-polynomial";
    case ErrorKind::isolation: return "isolation";
    case ErrorKind::division_by_zero: return "division";
    case ErrorKind::precision: return "precision";
    case ErrorKind::boundary_undecidable: return "boundary-undecidable";
    case ErrorKind::invalid_parameters: return "invalid-parameters";
    case ErrorKind::witness_not_found: return "witness-not-found-at-cap";
    case ErrorKind::parse: return "parse";
  }
  return "unknown";
}

}  // namespace cantrans
