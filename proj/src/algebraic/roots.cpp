#include "cantrans/algebraic/roots.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>

#include "cantrans/error.hpp"

namespace cantrans::algebraic {

using numeric::ComplexBox;
using numeric::Interval;
using numeric::Precision;

Precision ladder_level(Precision bits) {
  require(bits <= max_ladder_precision, ErrorKind::precision,
          "requested " + std::to_string(bits) + " bits, ladder stops at " + std::to_string(max_ladder_precision));
  Precision level = min_ladder_precision;
  while (level < bits) level *= 2;
  return level;
}

namespace {

// Round-to-nearest MPFR scalar used for the floating root iteration; the
// certification step never trusts these values beyond using them as centers.
class Mp {
 public:
  explicit Mp(Precision p) {
    mpfr_init2(v_, p);
    mpfr_set_zero(v_, 1);
  }
  Mp(const Mp& o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  Mp& operator=(const Mp& o) {
    if (this != &o) {
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  ~Mp() { mpfr_clear(v_); }

  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }
  Precision prec() const { return mpfr_get_prec(v_); }
  void round_to(Precision p) { mpfr_prec_round(v_, p, MPFR_RNDN); }

 private:
  mpfr_t v_;
};

struct Cx {
  Mp re;
  Mp im;
  explicit Cx(Precision p) : re(p), im(p) {}
};

Cx add(const Cx& a, const Cx& b) {
  Cx r(a.re.prec());
  mpfr_add(r.re.get(), a.re.get(), b.re.get(), MPFR_RNDN);
  mpfr_add(r.im.get(), a.im.get(), b.im.get(), MPFR_RNDN);
  return r;
}

Cx sub(const Cx& a, const Cx& b) {
  Cx r(a.re.prec());
  mpfr_sub(r.re.get(), a.re.get(), b.re.get(), MPFR_RNDN);
  mpfr_sub(r.im.get(), a.im.get(), b.im.get(), MPFR_RNDN);
  return r;
}

Cx mul(const Cx& a, const Cx& b) {
  const Precision p = a.re.prec();
  Cx r(p);
  Mp t(p);
  mpfr_mul(r.re.get(), a.re.get(), b.re.get(), MPFR_RNDN);
  mpfr_mul(t.get(), a.im.get(), b.im.get(), MPFR_RNDN);
  mpfr_sub(r.re.get(), r.re.get(), t.get(), MPFR_RNDN);
  mpfr_mul(r.im.get(), a.re.get(), b.im.get(), MPFR_RNDN);
  mpfr_mul(t.get(), a.im.get(), b.re.get(), MPFR_RNDN);
  mpfr_add(r.im.get(), r.im.get(), t.get(), MPFR_RNDN);
  return r;
}

Mp norm(const Cx& a) {
  Mp r(a.re.prec());
  Mp t(a.re.prec());
  mpfr_sqr(r.get(), a.re.get(), MPFR_RNDN);
  mpfr_sqr(t.get(), a.im.get(), MPFR_RNDN);
  mpfr_add(r.get(), r.get(), t.get(), MPFR_RNDN);
  return r;
}

Cx div(const Cx& a, const Cx& b) {
  const Precision p = a.re.prec();
  Mp n = norm(b);
  Cx conj(p);
  mpfr_set(conj.re.get(), b.re.get(), MPFR_RNDN);
  mpfr_neg(conj.im.get(), b.im.get(), MPFR_RNDN);
  Cx r = mul(a, conj);
  mpfr_div(r.re.get(), r.re.get(), n.get(), MPFR_RNDN);
  mpfr_div(r.im.get(), r.im.get(), n.get(), MPFR_RNDN);
  return r;
}

Cx one(Precision p) {
  Cx r(p);
  mpfr_set_ui(r.re.get(), 1, MPFR_RNDN);
  return r;
}

// Horner evaluation of f and f' at z.
std::pair<Cx, Cx> eval_with_derivative(const std::vector<Mp>& coeffs, const Cx& z) {
  const Precision p = z.re.prec();
  Cx f(p);
  Cx df(p);
  for (std::size_t k = coeffs.size(); k-- > 0;) {
    df = add(mul(df, z), f);
    f = mul(f, z);
    mpfr_add(f.re.get(), f.re.get(), coeffs[k].get(), MPFR_RNDN);
  }
  return {f, df};
}

ComplexBox point_box(const Cx& z, Precision p) {
  return ComplexBox(Interval::from_mpfr(z.re.get(), z.re.get(), p), Interval::from_mpfr(z.im.get(), z.im.get(), p));
}

Interval widen(const Interval& center, const Interval& radius) {
  Interval lo = center - radius;
  Interval hi = center + radius;
  return Interval::from_mpfr(lo.lo(), hi.hi(), center.precision());
}

struct Certified {
  std::vector<ComplexBox> boxes;
  std::vector<bool> real;
};

}  // namespace

struct RootSet::State {
  Precision wp = 0;
  std::vector<Cx> z;
  bool started = false;
};

namespace {

// One pass of Aberth iterations at the state's precision; returns true when
// every correction fell below 2^-(wp - 8) relative to max(1, |z|).
bool aberth(const Poly& f, std::vector<Cx>& z, Precision wp, int max_iter) {
  const std::size_t d = z.size();
  std::vector<Mp> coeffs;
  for (const auto& c : f.coeffs()) {
    coeffs.emplace_back(wp);
    mpfr_set_q(coeffs.back().get(), c.get_mpq_t(), MPFR_RNDN);
  }
  Mp tol(wp);
  mpfr_set_ui_2exp(tol.get(), 1, -static_cast<long>(wp) + 8, MPFR_RNDN);
  mpfr_sqr(tol.get(), tol.get(), MPFR_RNDN);
  for (int it = 0; it < max_iter; ++it) {
    bool converged = true;
    for (std::size_t i = 0; i < d; ++i) {
      auto [fz, dfz] = eval_with_derivative(coeffs, z[i]);
      if (mpfr_zero_p(fz.re.get()) && mpfr_zero_p(fz.im.get())) continue;
      if (mpfr_zero_p(dfz.re.get()) && mpfr_zero_p(dfz.im.get())) {
        // Nudge off a critical point.
        mpfr_add_d(z[i].re.get(), z[i].re.get(), 1e-3, MPFR_RNDN);
        mpfr_add_d(z[i].im.get(), z[i].im.get(), 1e-3, MPFR_RNDN);
        converged = false;
        continue;
      }
      Cx w = div(fz, dfz);
      Cx s(wp);
      for (std::size_t j = 0; j < d; ++j) {
        if (j != i) s = add(s, div(one(wp), sub(z[i], z[j])));
      }
      Cx corr = div(w, sub(one(wp), mul(w, s)));
      z[i] = sub(z[i], corr);
      Mp scale = norm(z[i]);
      if (mpfr_cmp_ui(scale.get(), 1) < 0) mpfr_set_ui(scale.get(), 1, MPFR_RNDN);
      Mp c = norm(corr);
      mpfr_div(c.get(), c.get(), scale.get(), MPFR_RNDN);
      if (mpfr_cmp(c.get(), tol.get()) > 0) converged = false;
    }
    if (converged) return true;
  }
  return false;
}

// Snaps the `real_count` approximations with the smallest imaginary parts
// onto the real axis and makes the rest exact conjugate pairs.
bool snap(std::vector<Cx>& z, std::size_t real_count, Precision wp) {
  const std::size_t d = z.size();
  std::vector<std::size_t> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return mpfr_cmpabs(z[a].im.get(), z[b].im.get()) < 0; });
  for (std::size_t k = 0; k < real_count; ++k) mpfr_set_zero(z[order[k]].im.get(), 1);
  std::vector<std::size_t> upper;
  std::vector<std::size_t> lower;
  for (std::size_t k = real_count; k < d; ++k) {
    const std::size_t i = order[k];
    if (mpfr_sgn(z[i].im.get()) > 0) upper.push_back(i);
    else if (mpfr_sgn(z[i].im.get()) < 0) lower.push_back(i);
    else return false;
  }
  if (upper.size() != lower.size()) return false;
  std::vector<bool> used(lower.size(), false);
  for (std::size_t i : upper) {
    std::size_t best = lower.size();
    Mp best_dist(wp);
    for (std::size_t k = 0; k < lower.size(); ++k) {
      if (used[k]) continue;
      Cx conj(wp);
      mpfr_set(conj.re.get(), z[i].re.get(), MPFR_RNDN);
      mpfr_neg(conj.im.get(), z[i].im.get(), MPFR_RNDN);
      Mp dist = norm(sub(conj, z[lower[k]]));
      if (best == lower.size() || mpfr_cmp(dist.get(), best_dist.get()) < 0) {
        best = k;
        best_dist = dist;
      }
    }
    used[best] = true;
    mpfr_set(z[lower[best]].re.get(), z[i].re.get(), MPFR_RNDN);
    mpfr_neg(z[lower[best]].im.get(), z[i].im.get(), MPFR_RNDN);
  }
  return true;
}

// Inclusion discs D(z_i, d |f(z_i)| / (|a_d| prod_{j != i} |z_i - z_j|)).
// When the discs are pairwise disjoint each holds exactly one root; a disc
// centred on the real axis then holds a real root, and a disc missing the
// real axis holds a non-real one.
std::optional<Certified> certify(const Poly& f, const std::vector<Cx>& z, Precision wp) {
  const std::size_t d = z.size();
  std::vector<ComplexBox> centers;
  for (const auto& zi : z) centers.push_back(point_box(zi, wp));
  const Interval lead = abs(Interval::enclose(f.leading(), wp));
  const Interval deg = Interval::point(static_cast<long>(d), wp);
  std::vector<Interval> radius;
  for (std::size_t i = 0; i < d; ++i) {
    Interval prod = Interval::point(1L, wp);
    for (std::size_t j = 0; j < d; ++j) {
      if (j != i) prod = prod * abs(centers[i] - centers[j]);
    }
    if (!prod.is_positive()) return std::nullopt;
    Interval r = deg * abs(f.eval(centers[i], wp)) / (lead * prod);
    radius.push_back(Interval::from_mpfr(r.hi(), r.hi(), wp));
  }
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i + 1; j < d; ++j) {
      if (!(radius[i] + radius[j]).certainly_less(abs(centers[i] - centers[j]))) return std::nullopt;
    }
  }
  Certified out;
  for (std::size_t i = 0; i < d; ++i) {
    const bool real = mpfr_zero_p(z[i].im.get()) != 0;
    if (!real && !radius[i].certainly_less(abs(centers[i].im))) return std::nullopt;
    Interval re = widen(centers[i].re, radius[i]);
    Interval im = real ? Interval::point(0L, wp) : widen(centers[i].im, radius[i]);
    out.boxes.emplace_back(std::move(re), std::move(im));
    out.real.push_back(real);
  }
  return out;
}

bool narrow_enough(const std::vector<ComplexBox>& boxes, Precision bits) {
  const long e = -static_cast<long>(bits);
  return std::all_of(boxes.begin(), boxes.end(),
                     [&](const ComplexBox& b) { return b.re.width_below_pow2(e) && b.im.width_below_pow2(e); });
}

// Strict "comes first" relation used once to fix the canonical order.
bool precedes(const ComplexBox& a, const ComplexBox& b) {
  const Interval ma = abs(a);
  const Interval mb = abs(b);
  if (mb.certainly_less(ma)) return true;
  if (ma.certainly_less(mb)) return false;
  if (b.re.certainly_less(a.re)) return true;
  if (a.re.certainly_less(b.re)) return false;
  return b.im.certainly_less(a.im);
}

}  // namespace

RootSet::RootSet(Poly f) : f_(std::move(f)), state_(std::make_shared<State>()) {
  require(f_.degree() >= 1, ErrorKind::invalid_polynomial, "polynomial must be nonconstant");
  require(is_square_free(f_), ErrorKind::invalid_polynomial, "polynomial is not square-free: " + f_.to_string());
  real_count_ = SturmSequence(f_).count_real();
}

void RootSet::compute_level(Precision level) const {
  const std::size_t d = degree();
  if (d == 1) {
    const Rational r = -f_.coeff(0) / f_.coeff(1);
    levels_[level] = {ComplexBox(Interval::enclose(r, level + 8), Interval::point(0L, level + 8))};
    real_ = {true};
    return;
  }
  State& st = *state_;
  Precision wp = std::max<Precision>(st.wp, level + 64);
  if (!st.started) {
    // Initial guesses on a circle of radius about the root bound, rotated
    // off the axes.
    st.wp = wp;
    const double bound = std::min(1e6, root_bound(f_).get_d());
    const double pi = std::acos(-1.0);
    for (std::size_t k = 0; k < d; ++k) {
      Cx c(wp);
      const double angle = 2 * pi * static_cast<double>(k) / static_cast<double>(d) + 0.4;
      mpfr_set_d(c.re.get(), bound * 0.5 * std::cos(angle), MPFR_RNDN);
      mpfr_set_d(c.im.get(), bound * 0.5 * std::sin(angle), MPFR_RNDN);
      st.z.push_back(std::move(c));
    }
    st.started = true;
  }
  const Precision wp_cap = 8 * level + 1024;
  for (int attempt = 0; wp <= wp_cap; ++attempt) {
    for (auto& c : st.z) {
      c.re.round_to(wp);
      c.im.round_to(wp);
    }
    st.wp = wp;
    aberth(f_, st.z, wp, attempt == 0 && levels_.empty() ? 2000 : 200);
    std::vector<Cx> snapped = st.z;
    if (snap(snapped, real_count_, wp)) {
      auto cert = certify(f_, snapped, wp);
      if (cert && narrow_enough(cert->boxes, level)) {
        if (levels_.empty()) {
          std::vector<std::size_t> order(d);
          std::iota(order.begin(), order.end(), 0);
          std::stable_sort(order.begin(), order.end(),
                           [&](std::size_t a, std::size_t b) { return precedes(cert->boxes[a], cert->boxes[b]); });
          std::vector<ComplexBox> boxes;
          std::vector<bool> real;
          std::vector<Cx> z;
          for (std::size_t i : order) {
            boxes.push_back(cert->boxes[i]);
            real.push_back(cert->real[i]);
            z.push_back(snapped[i]);
          }
          require(static_cast<std::size_t>(std::count(real.begin(), real.end(), true)) == real_count_,
                  ErrorKind::internal_consistency, "certified real roots disagree with the Sturm count");
          st.z = std::move(z);
          levels_[level] = std::move(boxes);
          real_ = std::move(real);
          return;
        }
        // Match against the finest level so far; each new disc must meet
        // exactly one old enclosure.
        const auto& prev = levels_.rbegin()->second;
        std::vector<std::size_t> match(d, d);
        bool ok = true;
        std::vector<bool> taken(d, false);
        for (std::size_t i = 0; i < d && ok; ++i) {
          for (std::size_t j = 0; j < d; ++j) {
            if (cert->real[i] == real_[j] && numeric::overlaps(cert->boxes[i], prev[j])) {
              if (match[i] != d || taken[j]) {
                ok = false;
                break;
              }
              match[i] = j;
            }
          }
          if (match[i] == d) ok = false;
          if (ok) taken[match[i]] = true;
        }
        if (ok) {
          std::vector<ComplexBox> boxes(d);
          std::vector<Cx> z(d, Cx(wp));
          for (std::size_t i = 0; i < d; ++i) {
            boxes[match[i]] = numeric::intersect(cert->boxes[i], prev[match[i]]);
            z[match[i]] = snapped[i];
          }
          st.z = std::move(z);
          levels_[level] = std::move(boxes);
          return;
        }
      }
    }
    wp *= 2;
  }
  fail(ErrorKind::precision, "root certification for " + f_.to_string() + " did not reach " + std::to_string(level) +
                                 " bits");
}

std::vector<ComplexBox> RootSet::enclosures(Precision bits) const {
  const Precision target = ladder_level(std::max<Precision>(bits, min_ladder_precision));
  std::lock_guard lock(mutex_);
  for (Precision level = min_ladder_precision; level <= target; level *= 2) {
    if (!levels_.count(level)) compute_level(level);
  }
  return levels_.at(target);
}

bool RootSet::is_real(std::size_t index) const {
  enclosures(min_ladder_precision);
  std::lock_guard lock(mutex_);
  require(index < real_.size(), ErrorKind::invalid_parameters, "root index out of range");
  return real_[index];
}

}  // namespace cantrans::algebraic
