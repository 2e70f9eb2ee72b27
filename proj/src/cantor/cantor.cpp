#include "cantrans/cantor/cantor.hpp"

#include <algorithm>
#include <unordered_map>

#include "cantrans/error.hpp"

namespace cantrans::cantor {

using algebraic::AlgebraicNumber;
using algebraic::MagnitudeIndex;

namespace {

Rational pow2_neg(Precision bits) {
  Natural den = 1;
  den <<= static_cast<mp_bitcnt_t>(bits);
  return Rational(Natural(1), den);
}

Digit to_digit(const Natural& n) {
  require(n >= 0 && fits_u64(n), ErrorKind::invalid_parameters, "digit does not fit in 64 bits");
  return to_u64(n);
}

Interval real_part(const FieldElement& x, Precision bits) { return x.value(bits).re; }

Natural floor_q(const Rational& q) {
  Natural out;
  mpz_fdiv_q(out.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return out;
}

Natural ceil_q(const Rational& q) {
  Natural out;
  mpz_cdiv_q(out.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return out;
}

Interval ipoint(long v, Precision p) { return Interval::point(v, p); }

Interval ipoint(const Natural& v, Precision p) { return Interval::point(v, p); }

}  // namespace

CantorBase CantorBase::exact(std::vector<FieldElement> entries) {
  require(!entries.empty(), ErrorKind::invalid_parameters, "Cantor base needs at least one entry");
  CantorBase b;
  b.p_ = entries.size();
  b.field_ = entries.front().shared_field();
  require(b.field_->generator().is_real(), ErrorKind::invalid_parameters, "Cantor base field must be real");
  for (const auto& e : entries) {
    require(e.field().same(*b.field_), ErrorKind::invalid_parameters, "Cantor base entries from different fields");
    require(e.compare(Rational(1)) > 0, ErrorKind::invalid_parameters, "Cantor base entry " + e.to_string() + " is not > 1");
  }
  b.exact_ = std::move(entries);
  FieldElement delta = b.field_->one();
  for (const auto& e : b.exact_) delta = delta * e;
  require(delta == b.field_->gen(), ErrorKind::invalid_parameters,
          "product of the base entries must equal the field generator");
  b.delta_ = delta;
  std::size_t imin = 0;
  Natural top = 0;
  for (std::size_t i = 0; i < b.p_; ++i) {
    if (b.exact_[i].compare(b.exact_[imin]) < 0) imin = i;
    top = std::max(top, b.exact_[i].ceil());
  }
  b.beta_min_index_ = imin;
  b.beta_min_ = b.exact_[imin];
  b.alphabet_bound_ = to_digit(top - 1);
  return b;
}

CantorBase CantorBase::rational(const std::vector<Rational>& entries) {
  require(!entries.empty(), ErrorKind::invalid_parameters, "Cantor base needs at least one entry");
  Rational prod = 1;
  for (const auto& e : entries) prod *= e;
  auto field = NumberField::make(AlgebraicNumber::rational(prod));
  std::vector<FieldElement> fe;
  for (const auto& e : entries) fe.push_back(field->from_rational(e));
  return exact(std::move(fe));
}

CantorBase CantorBase::numeric(std::vector<Interval> entries) {
  require(!entries.empty(), ErrorKind::invalid_parameters, "Cantor base needs at least one entry");
  CantorBase b;
  b.p_ = entries.size();
  Natural top = 0;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    require(entries[i].certainly_greater(Rational(1)), ErrorKind::invalid_parameters,
            "numeric Cantor base entry not certified > 1");
    const Natural lo = ceil_q(entries[i].lo_q());
    const Natural hi = ceil_q(entries[i].hi_q());
    require(lo == hi, ErrorKind::boundary_undecidable, "ceiling of a numeric base entry is ambiguous");
    top = std::max(top, hi);
    if (entries[i].certainly_less(entries[b.beta_min_index_])) b.beta_min_index_ = i;
  }
  b.alphabet_bound_ = to_digit(top - 1);
  b.approx_ = std::move(entries);
  return b;
}

const FieldElement& CantorBase::entry(std::size_t k) const {
  require(is_exact(), ErrorKind::invalid_parameters, "exact entry requested from a numeric base");
  return exact_[k % p_];
}

Interval CantorBase::entry_enclosure(std::size_t k, Precision bits) const {
  return is_exact() ? real_part(exact_[k % p_], bits) : approx_[k % p_];
}

const FieldElement& CantorBase::delta() const {
  require(is_exact(), ErrorKind::invalid_parameters, "exact delta requested from a numeric base");
  return *delta_;
}

const FieldElement& CantorBase::beta_min() const {
  require(is_exact(), ErrorKind::invalid_parameters, "exact beta_min requested from a numeric base");
  return *beta_min_;
}

Interval CantorBase::delta_enclosure(Precision bits) const {
  if (is_exact()) return real_part(*delta_, bits);
  Interval d = approx_.front();
  for (std::size_t i = 1; i < p_; ++i) d = d * approx_[i];
  return d;
}

Interval CantorBase::beta_min_enclosure(Precision bits) const {
  if (is_exact()) return real_part(*beta_min_, bits);
  Interval m = approx_.front();
  for (const auto& e : approx_) m = min(m, e);
  return m;
}

FieldElement CantorBase::tail_constant() const {
  const FieldElement bp = beta_min().pow(static_cast<long>(p_));
  const FieldElement& d = delta();
  return d * (bp - Rational(1)) / (bp * (d - Rational(1)) * (beta_min() - Rational(1)));
}

Interval CantorBase::tail_constant_enclosure(Precision bits) const {
  if (is_exact()) return real_part(tail_constant(), bits);
  const Interval one = ipoint(1L, bits);
  const Interval bm = beta_min_enclosure(bits);
  const Interval bp = pow(bm, p_);
  const Interval d = delta_enclosure(bits);
  return d * (bp - one) / (bp * (d - one) * (bm - one));
}

std::string CantorBase::to_string() const {
  std::string out = "(";
  for (std::size_t i = 0; i < p_; ++i) {
    if (i) out += ", ";
    out += is_exact() ? exact_[i].to_string() : approx_[i].mid_string(20);
  }
  return out + ")";
}

nlohmann::json CantorBase::to_json() const {
  nlohmann::json entries = nlohmann::json::array();
  if (is_exact()) {
    for (const auto& e : exact_) entries.push_back(e.to_json());
    const nlohmann::json gen = field_->generator().to_json();
    return {{"period", p_}, {"entries", entries}, {"delta_min_poly", gen.at("min_poly")}, {"delta_root", gen.at("root")}};
  }
  for (const auto& e : approx_) {
    // Re-encode as midpoint and a decimal radius that covers the enclosure.
    const Rational w = e.width_q();
    int digits = 0;
    Rational scale = 1;
    while (scale * w < 1 && digits < 60) {
      scale *= 10;
      ++digits;
    }
    entries.push_back({{"approx", e.mid_string(digits + 2)}, {"certified_digits", std::max(0, digits - 1)}});
  }
  return {{"period", p_}, {"entries", entries}};
}

CantorBase CantorBase::from_json(const nlohmann::json& j) {
  try {
    const auto& entries = j.at("entries");
    require(entries.is_array() && !entries.empty(), ErrorKind::parse, "entries must be a nonempty array");
    if (j.contains("period")) {
      require(j.at("period").get<std::size_t>() == entries.size(), ErrorKind::parse,
              "period does not match the number of entries");
    }
    const bool any_numeric = std::any_of(entries.begin(), entries.end(),
                                         [](const auto& e) { return e.is_object() && e.contains("approx"); });
    if (any_numeric) {
      std::vector<Interval> enc;
      for (const auto& e : entries) {
        if (e.is_object() && e.contains("approx")) {
          const Rational mid = numeric::parse_decimal_exact(e.at("approx").get<std::string>());
          const unsigned digits = e.at("certified_digits").get<unsigned>();
          Natural ten = 1;
          for (unsigned i = 0; i < digits; ++i) ten *= 10;
          const Rational rad(Natural(1), ten);
          enc.push_back(Interval::hull(mid - rad, mid + rad, static_cast<Precision>(digits) * 4 + 64));
        } else {
          const auto& c = e.is_object() ? e.at("coords") : e;
          const auto& v = c.is_array() ? c.at(0) : c;
          require(!c.is_array() || c.size() == 1, ErrorKind::parse, "mixed numeric bases accept rational entries only");
          const Rational q = v.is_string() ? parse_rational(v.get<std::string>()) : Rational(v.get<long>());
          enc.push_back(Interval::enclose(q, 256));
        }
      }
      return numeric(std::move(enc));
    }
    if (j.contains("delta_min_poly")) {
      nlohmann::json desc = {{"min_poly", j.at("delta_min_poly")}};
      desc["root"] = j.contains("delta_root") ? j.at("delta_root") : nlohmann::json{{"index_by_magnitude", 0}};
      auto field = NumberField::make(AlgebraicNumber::from_json(desc));
      std::vector<FieldElement> fe;
      for (const auto& e : entries) fe.push_back(FieldElement::from_json(field, e));
      return exact(std::move(fe));
    }
    std::vector<Rational> q;
    for (const auto& e : entries) {
      const auto& c = e.is_object() ? e.at("coords") : e;
      const auto& v = c.is_array() ? c.at(0) : c;
      q.push_back(v.is_string() ? parse_rational(v.get<std::string>()) : Rational(v.get<long>()));
    }
    return rational(q);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::parse, std::string("Cantor base descriptor: ") + e.what());
  }
}

namespace {

Step step_unchecked(const FieldElement& z, const FieldElement& beta) {
  FieldElement y = beta * z;
  const Natural d = y.floor();
  return {to_digit(d), y - Rational(d)};
}

void require_unit_interval(const FieldElement& z) {
  require(z.sign() >= 0 && z.compare(Rational(1)) < 0, ErrorKind::invalid_parameters,
          "state " + z.to_string() + " is not in [0, 1)");
}

}  // namespace

Step greedy_step(const FieldElement& z, const FieldElement& beta) {
  require_unit_interval(z);
  return step_unchecked(z, beta);
}

NumericStep greedy_step(const Interval& z, const Interval& beta) {
  Interval y = beta * z;
  const Natural lo = floor_q(y.lo_q());
  const Natural hi = floor_q(y.hi_q());
  if (lo != hi) fail(ErrorKind::boundary_undecidable, "beta * z = " + y.to_string(20) + " straddles an integer");
  const Interval next = y - ipoint(lo, y.precision());
  return {to_digit(lo), max(next, ipoint(0L, y.precision()))};
}

GreedyExpander::GreedyExpander(const CantorBase& base, FieldElement x) : base_(&base), z_(std::move(x)) {
  require(base.is_exact(), ErrorKind::invalid_parameters, "exact expansion needs an exact base");
  require_unit_interval(z_);
}

Digit GreedyExpander::next() {
  Step s = step_unchecked(z_, base_->entry(k_));
  z_ = std::move(s.next);
  ++k_;
  return s.digit;
}

Expansion expand(const FieldElement& x, const CantorBase& base, std::size_t n) {
  GreedyExpander g(base, x);
  Expansion out;
  out.digits.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.digits.push_back(g.next());
  out.remainder = g.state();
  return out;
}

FieldElement lift(const CantorBase& base, const Rational& x) {
  require(base.is_exact(), ErrorKind::invalid_parameters, "lift needs an exact base");
  return base.field()->from_rational(x);
}

Expansion expand(const Rational& x, const CantorBase& base, std::size_t n) {
  if (base.is_exact()) return expand(lift(base, x), base, n);
  return expand_numeric(Interval::enclose(x, 256), base, n, 256);
}

Expansion expand_numeric(const Interval& x, const CantorBase& base, std::size_t n, Precision bits) {
  require(!x.certainly_less(Rational(0)) && x.lo_q() >= 0 && x.certainly_less(Rational(1)),
          ErrorKind::invalid_parameters, "x is not certified in [0, 1)");
  Expansion out;
  out.heuristic = true;
  Interval z = x;
  for (std::size_t k = 0; k < n; ++k) {
    NumericStep s = greedy_step(z, base.entry_enclosure(k, bits));
    out.digits.push_back(s.digit);
    z = s.next;
  }
  return out;
}

FieldElement tail_bound(const CantorBase& base, std::size_t n, Digit max_digit) {
  const std::size_t p = base.period();
  FieldElement prod = base.delta().pow(-static_cast<long>(n / p));
  for (std::size_t i = 0; i < n % p; ++i) prod = prod / base.entry(i);
  return prod * base.tail_constant() * Rational(Natural(from_u64(max_digit)));
}

Interval tail_bound_enclosure(const CantorBase& base, std::size_t n, Digit max_digit, Precision bits) {
  if (base.is_exact()) return real_part(tail_bound(base, n, max_digit), bits);
  const std::size_t p = base.period();
  Interval prod = ipoint(1L, bits) / pow(base.delta_enclosure(bits), n / p);
  for (std::size_t i = 0; i < n % p; ++i) prod = prod / base.entry_enclosure(i, bits);
  return prod * base.tail_constant_enclosure(bits) * ipoint(from_u64(max_digit), bits);
}

std::size_t terms_for_tail(const CantorBase& base, Digit max_digit, Precision bits) {
  if (max_digit == 0) return 0;
  const Rational target = pow2_neg(bits);
  auto small = [&](std::size_t n) { return tail_bound_enclosure(base, n, max_digit, bits + 32).certainly_less(target); };
  std::size_t hi = base.period();
  while (!small(hi)) {
    require(hi < (std::size_t{1} << 40), ErrorKind::precision, "tail bound does not shrink");
    hi *= 2;
  }
  std::size_t lo = 0;  // small(lo) is false or lo == 0
  if (small(0)) return 0;
  while (hi - lo > 1) {
    const std::size_t mid = lo + (hi - lo) / 2;
    (small(mid) ? hi : lo) = mid;
  }
  return hi;
}

ValueEnclosure val(std::span<const Digit> digits, const CantorBase& base, Precision bits, Digit tail_max) {
  const Precision wp = bits + 32 + static_cast<Precision>(bit_length(from_u64(digits.size() + 1)));
  Interval prod = ipoint(1L, wp);
  Interval partial = ipoint(0L, wp);
  for (std::size_t k = 0; k < digits.size(); ++k) {
    prod = prod / base.entry_enclosure(k, wp);
    if (digits[k] != 0) partial = partial + prod * ipoint(from_u64(digits[k]), wp);
  }
  Interval t = ipoint(0L, wp);
  if (tail_max > 0) {
    const Interval tb = tail_bound_enclosure(base, digits.size(), tail_max, wp);
    t = Interval::from_mpfr(t.lo(), tb.hi(), wp);
  }
  ValueEnclosure out{partial + t, partial, t, base.heuristic()};
  return out;
}

FieldElement val_exact(std::span<const Digit> digits, const CantorBase& base) {
  FieldElement prod = base.field()->one();
  FieldElement sum = base.field()->zero();
  for (std::size_t k = 0; k < digits.size(); ++k) {
    prod = prod / base.entry(k);
    if (digits[k] != 0) sum = sum + prod * Rational(Natural(from_u64(digits[k])));
  }
  return sum;
}

Digit PeriodicityCertificate::digit(std::size_t n) const {
  require(n >= 1, ErrorKind::invalid_parameters, "digits are indexed from 1");
  std::size_t idx = n - 1;
  if (idx >= digits.size()) idx = orbit_preperiod + (idx - orbit_preperiod) % orbit_period;
  return digits[idx];
}

nlohmann::json PeriodicityCertificate::to_json(const CantorBase& base, const FieldElement& x) const {
  return {{"kind", "periodicity-certificate"},
          {"base", base.to_json()},
          {"x", x.to_json()},
          {"preperiod", preperiod},
          {"period", period},
          {"orbit_preperiod", orbit_preperiod},
          {"orbit_period", orbit_period},
          {"position_mod_p", position_mod_p},
          {"state", state->to_json()},
          {"digits", digits}};
}

std::optional<PeriodicityCertificate> detect_periodicity(const FieldElement& x, const CantorBase& base,
                                                         std::size_t max_steps) {
  constexpr std::size_t memo_cap = 10'000'000;
  max_steps = std::min(max_steps, memo_cap);
  const std::size_t p = base.period();
  GreedyExpander g(base, x);
  std::unordered_map<std::string, std::size_t> seen;
  std::vector<Digit> digits;
  for (std::size_t k = 0; k <= max_steps; ++k) {
    std::string key = std::to_string(k % p) + "|" + g.state().key();
    auto [it, inserted] = seen.emplace(std::move(key), k);
    if (!inserted) {
      PeriodicityCertificate c;
      c.orbit_preperiod = it->second;
      c.orbit_period = k - it->second;
      c.position_mod_p = k % p;
      c.state = g.state();
      c.digits = digits;
      const std::size_t j = c.orbit_preperiod;
      const std::size_t len = c.orbit_period;
      std::size_t per = len;
      for (std::size_t cand = 1; cand < len; ++cand) {
        if (len % cand != 0) continue;
        bool ok = true;
        for (std::size_t t = 0; t < len && ok; ++t) ok = digits[j + t] == digits[j + (t + cand) % len];
        if (ok) {
          per = cand;
          break;
        }
      }
      std::size_t pre = j;
      while (pre > 0 && digits[pre - 1] == digits[pre - 1 + per]) --pre;
      c.preperiod = pre;
      c.period = per;
      return c;
    }
    if (k == max_steps) break;
    digits.push_back(g.next());
  }
  return std::nullopt;
}

CertificateCheck verify_certificate(const PeriodicityCertificate& cert, const FieldElement& x, const CantorBase& base) {
  if (cert.orbit_period == 0 || cert.period == 0 || !cert.state) return {false, "empty period"};
  if (cert.digits.size() != cert.orbit_preperiod + cert.orbit_period) return {false, "digit list has the wrong length"};
  if (cert.orbit_preperiod % base.period() != cert.position_mod_p ||
      (cert.orbit_preperiod + cert.orbit_period) % base.period() != cert.position_mod_p) {
    return {false, "orbit positions disagree modulo the base period"};
  }
  const std::size_t n = std::max(cert.preperiod, cert.orbit_preperiod) + 3 * std::max(cert.period, cert.orbit_period);
  GreedyExpander g(base, x);
  for (std::size_t k = 1; k <= n; ++k) {
    if (g.position() == cert.orbit_preperiod && g.state() != *cert.state) return {false, "state at the preperiod differs"};
    if (g.position() == cert.orbit_preperiod + cert.orbit_period && g.state() != *cert.state) {
      return {false, "state after one orbit period differs"};
    }
    const Digit d = g.next();
    if (d != cert.digit(k)) return {false, "digit " + std::to_string(k) + " differs from a fresh expansion"};
  }
  for (std::size_t k = cert.preperiod + 1; k + cert.period <= n; ++k) {
    if (cert.digit(k) != cert.digit(k + cert.period)) return {false, "claimed digit period does not hold"};
  }
  if (cert.preperiod > 0 && cert.digit(cert.preperiod) == cert.digit(cert.preperiod + cert.period)) {
    return {false, "claimed preperiod is not minimal"};
  }
  return {true, "replayed " + std::to_string(n) + " digits"};
}

CertificateCheck verify_certificate_json(const nlohmann::json& j) {
  try {
    const CantorBase base = CantorBase::from_json(j.at("base"));
    require(base.is_exact(), ErrorKind::parse, "certificates are issued for exact bases only");
    const FieldElement x = FieldElement::from_json(base.field(), j.at("x"));
    PeriodicityCertificate c;
    c.preperiod = j.at("preperiod").get<std::size_t>();
    c.period = j.at("period").get<std::size_t>();
    c.orbit_preperiod = j.at("orbit_preperiod").get<std::size_t>();
    c.orbit_period = j.at("orbit_period").get<std::size_t>();
    c.position_mod_p = j.at("position_mod_p").get<std::size_t>();
    c.state = FieldElement::from_json(base.field(), j.at("state"));
    c.digits = j.at("digits").get<std::vector<Digit>>();
    return verify_certificate(c, x, base);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::parse, std::string("periodicity certificate: ") + e.what());
  }
}

AdmissibilityBound admissibility_bound(const CantorBase& base, Precision bits) {
  AdmissibilityBound out;
  out.heuristic = base.heuristic();
  if (base.is_exact()) {
    auto s = [](const FieldElement& x) { return x / (x - Rational(1)); };
    const FieldElement bp = base.beta_min().pow(static_cast<long>(base.period()));
    FieldElement t = s(bp) / s(base.delta()) * (base.beta_min() - Rational(1));
    out.enclosure = real_part(t, bits);
    out.digit_bound = to_digit(t.floor());
    out.exact = std::move(t);
    return out;
  }
  const Interval one = ipoint(1L, bits);
  auto s = [&](const Interval& x) { return x / (x - one); };
  const Interval bm = base.beta_min_enclosure(bits);
  out.enclosure = s(pow(bm, base.period())) / s(base.delta_enclosure(bits)) * (bm - one);
  const Natural lo = floor_q(out.enclosure.lo_q());
  require(lo == floor_q(out.enclosure.hi_q()), ErrorKind::boundary_undecidable,
          "floor of the admissibility threshold is ambiguous");
  out.digit_bound = to_digit(lo);
  return out;
}

AdmissibilityVerdict certify_admissible(std::span<const Digit> digits, const CantorBase& base) {
  const AdmissibilityBound b = admissibility_bound(base);
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (digits[i] > b.digit_bound) {
      return {false, "digit " + std::to_string(i + 1) + " exceeds the bound " + std::to_string(b.digit_bound)};
    }
  }
  const bool constant = std::adjacent_find(digits.begin(), digits.end(), std::not_equal_to<>()) == digits.end();
  if (constant) return {false, "constant digit word; the bound only covers non-constant sequences"};
  if (b.heuristic) return {false, "numeric base: bound holds only heuristically"};
  return {true, "digits within [0, " + std::to_string(b.digit_bound) + "] and not constant"};
}

ShiftCheck shift_value_check(std::span<const Digit> digits, const CantorBase& base, std::size_t horizon,
                             std::optional<Digit> tail_max, Precision bits) {
  require(horizon >= 1, ErrorKind::invalid_parameters, "horizon must be at least 1");
  require(horizon <= digits.size(), ErrorKind::insufficient_data, "digit prefix shorter than the horizon");
  const Precision wp = bits + 32;
  const Digit tm = tail_max.value_or(base.alphabet_bound());
  Interval v = ipoint(0L, wp);
  if (tm > 0) {
    const Interval c = base.tail_constant_enclosure(wp) * ipoint(from_u64(tm), wp);
    v = Interval::from_mpfr(v.lo(), c.hi(), wp);
  }
  std::vector<int> status(horizon, 0);  // 1 pass, -1 violation, 0 undecided
  for (std::size_t n = digits.size(); n-- > 0;) {
    v = (v + ipoint(from_u64(digits[n]), wp)) / base.entry_enclosure(n, wp);
    if (n < horizon) {
      status[n] = v.certainly_less(Rational(1)) ? 1 : (v.lo_q() >= 1 ? -1 : 0);
    }
  }
  ShiftCheck out;
  out.heuristic = base.heuristic();
  for (std::size_t n = 0; n < horizon; ++n) {
    if (status[n] == -1) {
      out.violation = n;
      return out;
    }
    if (status[n] == 0) {
      fail(ErrorKind::boundary_undecidable, "shifted value at n = " + std::to_string(n) + " cannot be separated from 1");
    }
  }
  out.ok = true;
  return out;
}

}  // namespace cantrans::cantor
