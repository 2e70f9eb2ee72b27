#include "cantrans/transcend/transcend.hpp"

#include <algorithm>
#include <cmath>

#include "cantrans/algebraic/pisot.hpp"
#include "cantrans/algebraic/places.hpp"
#include "cantrans/digits/factorial.hpp"
#include "cantrans/error.hpp"
#include "cantrans/lnzd/lnzd.hpp"

namespace cantrans::transcend {

using nlohmann::json;
using algebraic::FieldElement;

std::string_view to_string(Status s) noexcept {
  switch (s) {
    case Status::holds: return "criterion-holds";
    case Status::fails: return "criterion-fails";
    default: return "undecided-at-precision";
  }
}

std::string_view to_string(Provenance p) noexcept {
  return p == Provenance::automaton ? "automaton-derived" : "asserted";
}

namespace {

std::string_view stage_status(Status s) {
  switch (s) {
    case Status::holds: return "pass";
    case Status::fails: return "fail";
    default: return "undecided";
  }
}

Rational json_rational(const json& j, const char* key) {
  require(j.contains(key), ErrorKind::parse, std::string("missing field ") + key);
  const json& v = j.at(key);
  if (v.is_string()) return parse_rational(v.get<std::string>());
  require(v.is_number_integer(), ErrorKind::parse, std::string("field ") + key + " must be a rational string");
  return Rational(v.get<long>());
}

Interval ipoint(long v, Precision bits) { return Interval::point(v, bits); }

}  // namespace

Interval s_of(const Interval& x) { return x / (x - ipoint(1, x.precision())); }

json interval_json(const Interval& x, int digits) {
  return json{{"mid", x.mid_string(digits)}, {"rad", x.rad_string(digits)}};
}

void CriterionInput::validate() const {
  require(base.is_exact(), ErrorKind::invalid_parameters, "the criterion needs an exact Cantor base");
  require(omega > 1, ErrorKind::invalid_parameters, "omega must exceed 1");
  require(m_bound >= 0, ErrorKind::invalid_parameters, "M must be nonnegative");
}

CriterionInput CriterionInput::from_json(const json& j) {
  require(j.is_object(), ErrorKind::parse, "criterion input must be an object");
  CriterionInput in{cantor::CantorBase::from_json(j.at("base")), json_rational(j, "omega"), json_rational(j, "M")};
  const std::string prov = j.value("provenance", "asserted");
  require(prov == "asserted" || prov == "automaton-derived", ErrorKind::parse, "unknown provenance " + prov);
  in.provenance = prov == "asserted" ? Provenance::asserted : Provenance::automaton;
  in.validate();
  return in;
}

json CriterionInput::to_json() const {
  return json{{"base", base.to_json()},
              {"omega", cantrans::to_string(omega)},
              {"M", cantrans::to_string(m_bound)},
              {"provenance", std::string(transcend::to_string(provenance))}};
}

json Verdict::to_json() const {
  return json{{"status", std::string(transcend::to_string(status))},
              {"lhs", cantrans::to_string(lhs)},
              {"rhs", interval_json(rhs)},
              {"pisot_shortcut", pisot_shortcut},
              {"delta_class", delta_class},
              {"conditional", conditional},
              {"precision", precision},
              {"conclusion", conclusion}};
}

Verdict check_criterion(const CriterionInput& input, Precision bits, Precision cap) {
  input.validate();
  require(bits >= 16, ErrorKind::invalid_parameters, "precision must be at least 16 bits");
  Verdict v;
  v.lhs = (input.omega + input.m_bound) / (1 + input.m_bound);
  v.lhs.canonicalize();
  v.conditional = input.provenance == Provenance::asserted;
  const auto& delta = input.base.field()->generator();

  auto report = algebraic::classify_pisot_salem(delta, std::max(cap, bits));
  v.delta_class = std::string(algebraic::to_string(report.classification));
  if (report.classification == algebraic::PisotClass::pisot) {
    v.pisot_shortcut = true;
    v.rhs = ipoint(1, bits);
    v.precision = bits;
    v.status = v.lhs > 1 ? Status::holds : Status::fails;
  } else {
    for (Precision p = bits;; p *= 2) {
      p = std::min(p, cap);
      auto hr = algebraic::height_ratio(delta, p);
      v.rhs = hr.ratio;
      v.precision = p;
      if (hr.ratio.certainly_less(v.lhs)) {
        v.status = Status::holds;
        break;
      }
      if (hr.ratio.lo_q() >= v.lhs) {
        v.status = Status::fails;
        break;
      }
      if (p >= cap) break;
    }
  }
  switch (v.status) {
    case Status::holds:
      v.conclusion = "a sequence with this stammering in this base expands to a number in Q(delta) or a transcendental number";
      break;
    case Status::fails: v.conclusion = "(omega + M)/(1 + M) does not exceed F_S(delta)/log|delta|_w"; break;
    default: v.conclusion = "rhs enclosure still contains lhs at the precision cap"; break;
  }
  if (v.conditional && v.status == Status::holds) v.conclusion += " (conditional on stammering assertion)";
  return v;
}

const Stage& PipelineReport::stage(std::string_view name) const {
  for (const auto& s : stages)
    if (s.name == name) return s;
  fail(ErrorKind::invalid_parameters, "no stage named " + std::string(name));
}

int PipelineReport::exit_code() const {
  if (verdict == "transcendental") return 0;
  if (verdict == "rejected") return 2;
  return 3;
}

json PipelineReport::to_json() const {
  json st = json::array();
  for (const auto& s : stages) {
    st.push_back(json{{"name", s.name}, {"status", std::string(stage_status(s.status))}, {"detail", s.detail},
                      {"values", s.values}});
  }
  json j{{"kind", "lnzd-corollary-report"}, {"b", b}, {"base", base}, {"stages", st}, {"verdict", verdict},
         {"logic", logic}};
  if (!failing_stage.empty()) j["failing_stage"] = failing_stage;
  return j;
}

PipelineReport lnzd_corollary_pipeline(std::uint64_t b, const cantor::CantorBase& base, Precision bits,
                                       const ScanOptions& scan) {
  require(b > 2, ErrorKind::invalid_base, "the pipeline needs b > 2");
  require(base.is_exact(), ErrorKind::invalid_parameters, "the pipeline needs an exact Cantor base");
  PipelineReport rep;
  rep.b = b;
  rep.base = base.to_string();

  // Stage 1: automaticity from the Theta ordering.
  {
    auto bf = digits::BaseFactorization::of(b);
    Stage s;
    s.name = "automaticity";
    json fac = json::array();
    for (const auto& f : bf.factors()) fac.push_back(json{{"p", f.p}, {"a", f.a}, {"theta", f.theta()}});
    s.values["factors"] = fac;
    const auto& f = bf.factors();
    if (bf.is_prime_power()) {
      s.status = Status::holds;
      s.detail = "b = " + std::to_string(f[0].p) + "^" + std::to_string(f[0].a) + " is a prime power";
    } else if (f[0].theta() > f[1].theta()) {
      s.status = Status::holds;
      s.detail = "a_1(p_1 - 1) = " + std::to_string(f[0].theta()) + " > a_2(p_2 - 1) = " + std::to_string(f[1].theta());
    } else {
      s.status = Status::fails;
      s.detail = "a_1(p_1 - 1) = a_2(p_2 - 1) = " + std::to_string(f[0].theta()) +
                 " and b is not a prime power; the sequence is not automatic";
    }
    if (s.status == Status::holds) s.values["automatic_radix"] = f[0].p;
    rep.stages.push_back(s);
  }

  // Stage 2: delta Pisot.
  const auto& delta_num = base.field()->generator();
  {
    Stage s;
    s.name = "pisot";
    auto pr = algebraic::classify_pisot_salem(delta_num);
    s.values = pr.to_json();
    s.detail = std::string(algebraic::to_string(pr.classification)) + ": " + pr.reason;
    s.status = pr.classification == algebraic::PisotClass::pisot       ? Status::holds
               : pr.classification == algebraic::PisotClass::undecided ? Status::undecided
                                                                       : Status::fails;
    rep.stages.push_back(s);
  }

  // Stage 3: (b - 1) s(delta) <= (beta_min - 1) s(beta_min^p), exactly.
  {
    Stage s;
    s.name = "digit-bound";
    const FieldElement& delta = base.delta();
    const FieldElement& bmin = base.beta_min();
    const FieldElement bp = bmin.pow(static_cast<long>(base.period()));
    const FieldElement lhs = (delta / (delta - Rational(1))) * Rational(static_cast<long>(b - 1));
    const FieldElement rhs = (bmin - Rational(1)) * (bp / (bp - Rational(1)));
    const FieldElement gap = rhs - lhs;
    const int sg = gap.sign();
    s.status = sg >= 0 ? Status::holds : Status::fails;
    s.values["lhs"] = interval_json(lhs.value(bits).re);
    s.values["rhs"] = interval_json(rhs.value(bits).re);
    s.values["gap"] = interval_json(gap.value(bits).re);
    if (base.field()->degree() == 1) {
      s.values["lhs_exact"] = cantrans::to_string(*lhs.as_rational());
      s.values["rhs_exact"] = cantrans::to_string(*rhs.as_rational());
    }
    s.detail = sg > 0    ? "(b - 1) s(delta) < (beta_min - 1) s(beta_min^p)"
               : sg == 0 ? "(b - 1) s(delta) = (beta_min - 1) s(beta_min^p); equality is allowed"
                         : "(b - 1) s(delta) > (beta_min - 1) s(beta_min^p)";
    rep.stages.push_back(s);
  }

  // Stage 4: non-periodicity evidence.
  {
    Stage s;
    s.name = "non-periodicity-evidence";
    auto sr = lnzd::scan_nonperiodicity(b, scan.lambda_max, scan.preperiod_max, scan.n_cap, scan.workers);
    s.values = sr.to_json(false);
    if (sr.exhausted.empty()) {
      s.status = Status::holds;
      s.detail = "every (lambda, N0) cell has a counterexample below n = " + std::to_string(sr.max_counterexample_index());
    } else {
      s.status = Status::undecided;
      s.detail = "WARNING: " + std::to_string(sr.exhausted.size()) + " cells exhausted below n_cap; corroboration only";
    }
    rep.stages.push_back(s);
  }

  for (std::size_t k = 0; k < 3; ++k) {
    if (rep.stages[k].status == Status::fails && rep.failing_stage.empty()) rep.failing_stage = rep.stages[k].name;
  }
  if (!rep.failing_stage.empty()) {
    rep.verdict = "rejected";
  } else if (std::any_of(rep.stages.begin(), rep.stages.begin() + 3,
                         [](const Stage& s) { return s.status == Status::undecided; })) {
    rep.verdict = "undecided";
    for (std::size_t k = 0; k < 3; ++k)
      if (rep.stages[k].status == Status::undecided) {
        rep.failing_stage = rep.stages[k].name;
        break;
      }
  } else {
    rep.verdict = "transcendental";
  }

  rep.logic = {
      "automaticity: lnzd_b(n!) is p_1-automatic, hence (omega, M)-stammering with omega > 1",
      "pisot: F_S(delta) = log|delta|_w, so the criterion reduces to omega > 1 and alpha lies in Q(delta) or is "
      "transcendental",
      "digit-bound: max digit b - 1 <= (beta_min - 1) s(beta_min^p) / s(delta) and the word is not constant, so "
      "(lnzd_b(n!)) is the greedy expansion of alpha",
      "non-periodicity: lnzd_b(n!) is not eventually periodic for b > 2, while every element of Q(delta) in [0, 1) "
      "has an eventually periodic greedy expansion when delta is Pisot, so alpha is not in Q(delta)",
  };
  if (rep.verdict == "transcendental") {
    rep.logic.emplace_back("therefore alpha_{b,B} is transcendental");
  } else if (rep.stage("pisot").status == Status::fails && rep.failing_stage == "pisot") {
    rep.logic.emplace_back("delta is not Pisot: the periodic-expansion step is unavailable, so at most the dichotomy "
                           "'alpha in Q(delta) or transcendental' could follow");
  }
  return rep;
}

json AlphaValue::to_json() const {
  json j{{"kind", "alpha-value"},
         {"enclosure", interval_json(enclosure, 60)},
         {"partial", interval_json(partial, 60)},
         {"terms", terms},
         {"tail_bound", Interval::from_mpfr(tail.hi(), tail.hi(), tail.precision()).mid_string(6)},
         {"constant_digits", constant_digits}};
  if (!note.empty()) j["note"] = note;
  return j;
}

AlphaValue eval_alpha(std::uint64_t b, const cantor::CantorBase& base, Precision bits) {
  require(b >= 2, ErrorKind::invalid_base, "base must be at least 2");
  require(base.is_exact(), ErrorKind::invalid_parameters, "alpha needs an exact Cantor base");
  require(bits >= 16, ErrorKind::invalid_parameters, "precision must be at least 16 bits");
  {
    const FieldElement& delta = base.delta();
    const FieldElement& bmin = base.beta_min();
    const FieldElement bp = bmin.pow(static_cast<long>(base.period()));
    const FieldElement gap = (bmin - Rational(1)) * (bp / (bp - Rational(1))) -
                             (delta / (delta - Rational(1))) * Rational(static_cast<long>(b - 1));
    require(gap.sign() >= 0, ErrorKind::invalid_parameters,
            "digit bound (b - 1) s(delta) <= (beta_min - 1) s(beta_min^p) fails; the series is not an expansion");
  }
  const std::size_t p = base.period();
  const Precision guard = bits + 64;
  const Interval delta = base.delta_enclosure(guard);
  const Interval bmin = base.beta_min_enclosure(guard);
  Interval geo = ipoint(0, guard), pw = ipoint(1, guard);
  for (std::size_t r = 0; r < p; ++r) {
    pw = pw / bmin;
    geo = geo + pw;
  }
  const Interval constant = ipoint(static_cast<long>(b - 1), guard) * s_of(delta) * geo;

  // Smallest q with constant * delta^-q < 2^-(bits + 1), estimated in doubles then certified.
  const double ld = std::log2(mpfr_get_d(delta.lo(), MPFR_RNDD));
  const double lc = std::log2(std::max(1e-300, mpfr_get_d(constant.hi(), MPFR_RNDU)));
  std::size_t q = static_cast<std::size_t>(std::max(0.0, std::ceil((lc + static_cast<double>(bits) + 1) / ld)));
  const Rational target = Rational(1, 1) / (Rational(Natural(1) << static_cast<unsigned>(bits + 1)));
  Interval tail_hi;
  while (true) {
    tail_hi = constant / numeric::pow(delta, q);
    if (tail_hi.certainly_less(target)) break;
    ++q;
  }
  const std::size_t n = q * p;

  const Precision wp = guard + static_cast<Precision>(bit_length(from_u64(n + 1)));
  std::vector<Interval> inv;
  for (std::size_t k = 0; k < p; ++k) inv.push_back(ipoint(1, wp) / base.entry_enclosure(k, wp));
  auto seq = lnzd::sequence(b, n);
  Interval prod = ipoint(1, wp), sum = ipoint(0, wp);
  for (std::size_t k = 0; k < n; ++k) {
    prod = prod * inv[k % p];
    sum = sum + prod * ipoint(static_cast<long>(seq[k]), wp);
  }

  AlphaValue out;
  out.terms = n;
  out.partial = sum;
  out.tail = Interval::from_mpfr(ipoint(0, wp).lo(), tail_hi.hi(), wp);
  out.enclosure = sum + out.tail;
  out.constant_digits = b == 2;
  if (out.constant_digits)
    out.note = "b = 2: every digit is 1, the word is constant and the value is a boundary case outside [0, 1)";
  return out;
}

}  // namespace cantrans::transcend
