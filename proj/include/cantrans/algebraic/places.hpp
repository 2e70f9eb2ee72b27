#pragma once

#include <string>
#include <vector>

#include "cantrans/algebraic/number.hpp"
#include "cantrans/numeric/interval.hpp"

namespace cantrans::algebraic {

enum class PlaceKind { real, complex_pair };

struct Place {
  PlaceKind kind;
  std::size_t root_index;  // representative root; the upper one for a pair
  unsigned e;              // 1 for real places, 2 for complex pairs
};

// Infinite places of Q(delta): one per real root, one per conjugate pair.
class PlaceSet {
 public:
  explicit PlaceSet(const AlgebraicNumber& delta);

  const std::vector<Place>& places() const { return places_; }
  std::size_t degree() const { return degree_; }
  // Index of the place of the selected root.
  std::size_t distinguished() const { return w_; }

  numeric::ComplexBox embed(const FieldElement& x, std::size_t place, numeric::Precision bits) const;
  // log |x|_v = (e_v / d) log |sigma_v(x)|; x must be nonzero at v.
  numeric::Interval log_abs(const FieldElement& x, std::size_t place, numeric::Precision bits) const;
  // |x|_v = |sigma_v(x)|^(e_v / d)
  numeric::Interval abs_v(const FieldElement& x, std::size_t place, numeric::Precision bits) const;

 private:
  std::vector<Place> places_;
  std::size_t degree_;
  std::size_t w_ = 0;
};

// Places with |delta|_v > 1 and with |delta|_v <= 1; places whose absolute
// value could not be separated from 1 at the cap go to `undecided`.
struct PlacePartition {
  std::vector<std::size_t> above_one;
  std::vector<std::size_t> at_most_one;
  std::vector<std::size_t> undecided;
};
PlacePartition partition_places(const AlgebraicNumber& delta, const PlaceSet& places,
                                 numeric::Precision cap = max_ladder_precision);

struct HeightRatio {
  numeric::Interval fs;     // F_S(delta) = sum_v log max(1, |delta|_v)
  numeric::Interval log_w;  // log |delta|_w
  numeric::Interval ratio;  // fs / log_w
  numeric::Precision bits;
};

// Enclosure of F_S(delta) with width below 2^-bits.
numeric::Interval f_s(const AlgebraicNumber& delta, numeric::Precision bits);
// F_S(delta) / log|delta|_w; requires |delta|_w > 1 at the distinguished place.
HeightRatio height_ratio(const AlgebraicNumber& delta, numeric::Precision bits);

}  // namespace cantrans::algebraic
