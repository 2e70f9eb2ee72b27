#include "cantrans/algebraic/places.hpp"

#include "cantrans/error.hpp"

namespace cantrans::algebraic {

using numeric::ComplexBox;
using numeric::Interval;
using numeric::Precision;

PlaceSet::PlaceSet(const AlgebraicNumber& delta) : degree_(delta.degree()) {
  const RootSet& roots = delta.roots();
  const auto encl = roots.enclosures(min_ladder_precision);
  std::vector<std::size_t> place_of(encl.size(), encl.size());
  for (std::size_t i = 0; i < encl.size(); ++i) {
    if (roots.is_real(i)) {
      place_of[i] = places_.size();
      places_.push_back({PlaceKind::real, i, 1});
    } else if (encl[i].im.is_positive()) {
      place_of[i] = places_.size();
      places_.push_back({PlaceKind::complex_pair, i, 2});
    }
  }
  // Lower roots of a pair belong to the place of their conjugate.
  for (std::size_t i = 0; i < encl.size(); ++i) {
    if (place_of[i] != encl.size()) continue;
    for (std::size_t j = 0; j < encl.size(); ++j) {
      if (place_of[j] != encl.size() && !roots.is_real(j) && encl[j].re.overlaps(encl[i].re) &&
          encl[j].im.overlaps(-encl[i].im)) {
        place_of[i] = place_of[j];
        break;
      }
    }
    require(place_of[i] != encl.size(), ErrorKind::internal_consistency, "unpaired complex root");
  }
  w_ = place_of[delta.index()];
  std::size_t total = 0;
  for (const auto& p : places_) total += p.e;
  require(total == degree_, ErrorKind::internal_consistency, "place multiplicities do not sum to the degree");
}

ComplexBox PlaceSet::embed(const FieldElement& x, std::size_t place, Precision bits) const {
  require(place < places_.size(), ErrorKind::invalid_parameters, "place index out of range");
  return x.embed(places_[place].root_index, bits);
}

Interval PlaceSet::log_abs(const FieldElement& x, std::size_t place, Precision bits) const {
  const Place& v = places_.at(place);
  const Interval a = abs(embed(x, place, bits));
  require(a.is_positive(), ErrorKind::precision, "element not certified nonzero at this place");
  const Precision p = a.precision();
  return log(a) * Interval::point(static_cast<long>(v.e), p) / Interval::point(static_cast<long>(degree_), p);
}

Interval PlaceSet::abs_v(const FieldElement& x, std::size_t place, Precision bits) const {
  return exp(log_abs(x, place, bits));
}

PlacePartition partition_places(const AlgebraicNumber& delta, const PlaceSet& places, Precision cap) {
  PlacePartition out;
  for (std::size_t v = 0; v < places.places().size(); ++v) {
    const std::size_t root = places.places()[v].root_index;
    bool decided = false;
    for (Precision level = min_ladder_precision; level <= cap && !decided; level *= 2) {
      const Interval m = abs(delta.roots().enclosures(level)[root]);
      if (m.certainly_greater(Rational(1))) {
        out.above_one.push_back(v);
        decided = true;
      } else if (!m.certainly_greater(Rational(1)) && m.hi_q() <= 1) {
        out.at_most_one.push_back(v);
        decided = true;
      }
    }
    if (!decided) out.undecided.push_back(v);
  }
  return out;
}

namespace {

Interval fs_at(const AlgebraicNumber& delta, const PlaceSet& places, Precision level) {
  const auto encl = delta.roots().enclosures(level);
  const Precision p = level + 32;
  const Interval one = Interval::point(1L, p);
  const Interval d = Interval::point(static_cast<long>(places.degree()), p);
  Interval sum = Interval::point(0L, p);
  for (const auto& v : places.places()) {
    const Interval term = log(max(one, abs(encl[v.root_index])));
    sum = sum + term * Interval::point(static_cast<long>(v.e), p) / d;
  }
  return sum;
}

}  // namespace

Interval f_s(const AlgebraicNumber& delta, Precision bits) {
  const PlaceSet places(delta);
  const long e = -static_cast<long>(bits);
  for (Precision level = ladder_level(std::min<Precision>(bits + 8, max_ladder_precision));
       level <= max_ladder_precision; level *= 2) {
    Interval s = fs_at(delta, places, level);
    if (s.width_below_pow2(e)) return s;
  }
  fail(ErrorKind::precision, "F_S enclosure did not reach " + std::to_string(bits) + " bits");
}

HeightRatio height_ratio(const AlgebraicNumber& delta, Precision bits) {
  const PlaceSet places(delta);
  const Place& w = places.places()[places.distinguished()];
  const long e = -static_cast<long>(bits);
  for (Precision level = ladder_level(std::min<Precision>(bits + 8, max_ladder_precision));
       level <= max_ladder_precision; level *= 2) {
    const Precision p = level + 32;
    const Interval mod_w = abs(delta.roots().enclosures(level)[w.root_index]);
    require(!(mod_w.hi_q() <= 1), ErrorKind::invalid_parameters, "|delta|_w <= 1, log|delta|_w is not positive");
    if (!mod_w.certainly_greater(Rational(1))) continue;
    Interval log_w = log(mod_w) * Interval::point(static_cast<long>(w.e), p) /
                     Interval::point(static_cast<long>(places.degree()), p);
    Interval fs = fs_at(delta, places, level);
    Interval ratio = fs / log_w;
    if (ratio.width_below_pow2(e) && fs.width_below_pow2(e) && log_w.width_below_pow2(e)) {
      return {std::move(fs), std::move(log_w), std::move(ratio), bits};
    }
  }
  fail(ErrorKind::precision, "height ratio did not reach " + std::to_string(bits) + " bits");
}

}  // namespace cantrans::algebraic
