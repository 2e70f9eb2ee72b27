#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "cantrans/algebraic/polynomial.hpp"
#include "cantrans/numeric/interval.hpp"

namespace cantrans::algebraic {

// Precision ladder for certified root enclosures.
inline constexpr numeric::Precision min_ladder_precision = 64;
inline constexpr numeric::Precision max_ladder_precision = 8192;
// Smallest ladder level >= bits; throws precision if bits > max_ladder_precision.
numeric::Precision ladder_level(numeric::Precision bits);

// All complex roots of a square-free polynomial with certified, pairwise
// disjoint enclosures. Real roots have an exactly-zero imaginary part.
//
// Order is fixed at the first certified level: decreasing modulus, then
// decreasing real part, then decreasing imaginary part (so a conjugate pair
// lists the upper root first). Enclosures for a higher ladder level are
// always contained in those of every lower level.
class RootSet {
 public:
  explicit RootSet(Poly f);

  const Poly& poly() const { return f_; }
  std::size_t degree() const { return static_cast<std::size_t>(f_.degree()); }
  std::size_t real_count() const { return real_count_; }

  // Enclosures of width < 2^-bits in both coordinates.
  std::vector<numeric::ComplexBox> enclosures(numeric::Precision bits) const;
  bool is_real(std::size_t index) const;

 private:
  struct State;
  void compute_level(numeric::Precision level) const;

  Poly f_;
  std::size_t real_count_ = 0;
  mutable std::mutex mutex_;
  mutable std::map<numeric::Precision, std::vector<numeric::ComplexBox>> levels_;
  mutable std::vector<bool> real_;
  mutable std::shared_ptr<State> state_;
};

}  // namespace cantrans::algebraic
