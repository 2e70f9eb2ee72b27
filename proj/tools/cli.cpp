#include "cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"

#include "cantrans/algebraic/pisot.hpp"
#include "cantrans/automata/automaton.hpp"
#include "cantrans/automata/stammer.hpp"
#include "cantrans/cantor/cantor.hpp"
#include "cantrans/digits/factorial.hpp"
#include "cantrans/error.hpp"
#include "cantrans/lnzd/lnzd.hpp"
#include "cantrans/simd/kernels.hpp"
#include "cantrans/transcend/transcend.hpp"

namespace cantrans::cli {

using nlohmann::json;
using std::uint64_t;
using numeric::Precision;

namespace {

struct Outcome {
  json doc;
  int code = exit_ok;
};

// ---------------------------------------------------------------- inputs

json load_json_arg(const std::string& text) {
  if (!text.empty() && (text.front() == '{' || text.front() == '[')) return json::parse(text);
  if (std::filesystem::exists(text)) {
    std::ifstream in(text);
    return json::parse(in);
  }
  fail(ErrorKind::parse, "expected inline JSON or a readable file: " + text);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// "2,3" (rational entries), inline JSON or a JSON file.
json base_spec(const std::string& text) {
  if (!text.empty() && text.front() != '{' && !std::filesystem::exists(text)) {
    std::vector<Rational> entries;
    for (const auto& e : split(text, ',')) entries.push_back(parse_rational(e));
    require(!entries.empty(), ErrorKind::parse, "empty base");
    return cantor::CantorBase::rational(entries).to_json();
  }
  return load_json_arg(text);
}

cantor::CantorBase exact_base(const json& spec) {
  auto base = cantor::CantorBase::from_json(spec);
  require(base.is_exact(), ErrorKind::invalid_parameters, "this command needs an exact base");
  return base;
}

// A rational "p/q" or field coordinates.
algebraic::FieldElement element_of(const cantor::CantorBase& base, const json& x) {
  if (x.is_string()) return cantor::lift(base, parse_rational(x.get<std::string>()));
  return algebraic::FieldElement::from_json(base.field(), x);
}

json element_spec(const std::string& text) {
  if (!text.empty() && (text.front() == '{' || text.front() == '[')) return json::parse(text);
  return json(to_string(parse_rational(text)));
}

automata::Automaton automaton_of(const std::string& text) {
  if (text == "thue-morse") return automata::thue_morse();
  if (text == "rudin-shapiro") return automata::rudin_shapiro();
  if (text == "baum-sweet") return automata::baum_sweet();
  if (text == "cantor-ternary") return automata::cantor_ternary();
  return automata::Automaton::from_json(load_json_arg(text));
}

json automaton_spec(const std::string& text) { return automaton_of(text).to_json(); }

uint64_t u64_of(const json& j, const char* key) {
  const json& v = j.at(key);
  if (v.is_string()) return to_u64(parse_natural(v.get<std::string>()));
  return v.get<uint64_t>();
}

std::vector<cantor::Digit> digit_list(const json& j) {
  if (j.is_string()) {
    std::vector<cantor::Digit> d;
    for (const auto& s : split(j.get<std::string>(), ',')) d.push_back(to_u64(parse_natural(s)));
    return d;
  }
  return j.get<std::vector<cantor::Digit>>();
}

// ---------------------------------------------------------------- handlers

Outcome do_lnzd(const json& rq) {
  const uint64_t b = u64_of(rq, "b");
  const Natural n = parse_natural(rq.at("n").get<std::string>());
  digits::LnzdEngine engine(b);
  return {json{{"kind", "lnzd-value"}, {"b", b}, {"n", to_decimal(n)}, {"lnzd", engine.lnzd_factorial(n)}}};
}

Outcome do_sequence(const json& rq) {
  const uint64_t b = u64_of(rq, "b");
  const uint64_t n_max = u64_of(rq, "n_max");
  return {json{{"kind", "lnzd-sequence"}, {"b", b}, {"n_max", n_max}, {"digits", lnzd::sequence(b, n_max)}}};
}

Outcome do_scan(const json& rq, unsigned workers) {
  auto rep = lnzd::scan_nonperiodicity(u64_of(rq, "b"), u64_of(rq, "lambda_max"), u64_of(rq, "n0_max"),
                                       u64_of(rq, "n_cap"), workers);
  return {rep.to_json(rq.value("cells", false)), rep.exhausted.empty() ? exit_ok : exit_undecided};
}

json gelfond_doc(uint64_t b, uint64_t k, uint64_t m, uint64_t x, const std::vector<uint64_t>& counts) {
  json rows = json::array();
  double worst = 0;
  const Rational expected(from_u64(x), from_u64(k) * from_u64(m));
  for (uint64_t a = 0; a < k; ++a) {
    json row = json::array();
    for (uint64_t r = 0; r < m; ++r) {
      const uint64_t c = counts[a * m + r];
      row.push_back(c);
      Rational dev = (Rational(from_u64(c)) - expected) / expected;
      worst = std::max(worst, std::fabs(dev.get_d()));
    }
    rows.push_back(row);
  }
  return json{{"kind", "gelfond-table"}, {"b", b}, {"k", k}, {"m", m}, {"x", x}, {"counts", rows},
              {"expected", to_string(expected)}, {"max_deviation", worst}};
}

Outcome do_gelfond(const json& rq) {
  const uint64_t b = u64_of(rq, "b"), k = u64_of(rq, "k"), m = u64_of(rq, "m"), x = u64_of(rq, "x");
  if (rq.contains("a")) {
    auto s = lnzd::gelfond_statistic(b, k, m, u64_of(rq, "a"), u64_of(rq, "r"), x);
    return {json{{"kind", "gelfond-statistic"}, {"b", b}, {"k", k}, {"m", m}, {"x", x}, {"a", u64_of(rq, "a")},
                 {"r", u64_of(rq, "r")}, {"count", s.count}, {"expected", to_string(s.expected)},
                 {"deviation", s.deviation}}};
  }
  // Full table; the statistic's gcd precondition still applies.
  lnzd::gelfond_statistic(b, k, m, 0, 0, std::max<uint64_t>(x, 1));
  return {gelfond_doc(b, k, m, x, lnzd::gelfond_table(b, k, m, x))};
}

Outcome do_witness(const json& rq) {
  auto w = lnzd::build_witness(u64_of(rq, "b"), static_cast<unsigned>(u64_of(rq, "i")),
                               parse_natural(rq.at("L").get<std::string>()),
                               static_cast<unsigned>(u64_of(rq, "cap")),
                               static_cast<unsigned>(u64_of(rq, "u_candidates")));
  return {w.to_json()};
}

Outcome do_expand(const json& rq) {
  auto base = cantor::CantorBase::from_json(rq.at("base"));
  const std::size_t n = u64_of(rq, "n");
  json doc{{"kind", "expansion"}, {"base", base.to_json()}, {"x", rq.at("x")}, {"n", n}};
  if (base.is_exact()) {
    auto x = element_of(base, rq.at("x"));
    auto e = cantor::expand(x, base, n);
    doc["digits"] = e.digits;
    doc["remainder"] = e.remainder->to_json();
    doc["heuristic"] = false;
  } else {
    const Precision bits = static_cast<Precision>(u64_of(rq, "bits"));
    const auto xi = numeric::Interval::enclose(parse_rational(rq.at("x").get<std::string>()), bits);
    auto e = cantor::expand_numeric(xi, base, n, bits);
    doc["digits"] = e.digits;
    doc["heuristic"] = true;
  }
  return {doc};
}

Outcome do_periodicity(const json& rq) {
  auto base = exact_base(rq.at("base"));
  const std::size_t max_steps = u64_of(rq, "max_steps");
  auto certify = [&](const algebraic::FieldElement& x) -> std::optional<json> {
    auto c = cantor::detect_periodicity(x, base, max_steps);
    if (!c) return std::nullopt;
    return c->to_json(base, x);
  };
  if (rq.contains("random")) {
    const uint64_t count = u64_of(rq, "random"), max_den = u64_of(rq, "max_den");
    require(max_den >= 1, ErrorKind::invalid_parameters, "max-den must be positive");
    std::mt19937_64 rng(u64_of(rq, "seed"));
    json certs = json::array();
    bool all = true;
    for (uint64_t t = 0; t < count; ++t) {
      const uint64_t q = 1 + rng() % max_den;
      const uint64_t p = rng() % q;
      Rational r(from_u64(p), from_u64(q));
      r.canonicalize();
      auto c = certify(cantor::lift(base, r));
      all = all && c.has_value();
      certs.push_back(c ? *c : json{{"x", to_string(r)}, {"found", false}});
    }
    return {json{{"kind", "periodicity-batch"}, {"certificates", certs}}, all ? exit_ok : exit_undecided};
  }
  auto c = certify(element_of(base, rq.at("x")));
  if (!c) return {json{{"kind", "periodicity-search"}, {"found", false}, {"max_steps", max_steps}}, exit_undecided};
  return {*c};
}

Outcome do_admissible(const json& rq) {
  auto base = cantor::CantorBase::from_json(rq.at("base"));
  const Precision bits = static_cast<Precision>(u64_of(rq, "bits"));
  auto ab = cantor::admissibility_bound(base, bits);
  json doc{{"kind", "admissibility"}, {"base", base.to_json()}, {"threshold", transcend::interval_json(ab.enclosure)},
           {"digit_bound", ab.digit_bound}, {"heuristic", ab.heuristic}};
  if (ab.exact) doc["threshold_exact"] = ab.exact->to_json();
  int code = exit_ok;
  if (rq.contains("digits")) {
    auto d = digit_list(rq.at("digits"));
    auto v = cantor::certify_admissible(d, base);
    doc["certified"] = v.certified;
    doc["reason"] = v.reason;
    if (!v.certified) code = exit_negative;
    if (rq.contains("horizon")) {
      auto sc = cantor::shift_value_check(d, base, u64_of(rq, "horizon"), std::nullopt, bits);
      doc["shift_check"] = json{{"ok", sc.ok}, {"heuristic", sc.heuristic}};
      if (sc.violation) doc["shift_check"]["violation"] = *sc.violation;
    }
  }
  return {doc, code};
}

Outcome do_pisot(const json& rq) {
  auto num = algebraic::AlgebraicNumber::from_json(rq.at("number"));
  auto rep = algebraic::classify_pisot_salem(num, static_cast<Precision>(u64_of(rq, "cap")));
  json doc = rep.to_json();
  doc["kind"] = "pisot-report";
  doc["number"] = num.to_json();
  int code = exit_ok;
  if (rep.classification == algebraic::PisotClass::neither) code = exit_negative;
  if (rep.classification == algebraic::PisotClass::undecided) code = exit_undecided;
  return {doc, code};
}

int status_code(transcend::Status s) {
  switch (s) {
    case transcend::Status::holds: return exit_ok;
    case transcend::Status::fails: return exit_negative;
    default: return exit_undecided;
  }
}

Outcome do_criterion(const json& rq) {
  const Precision bits = static_cast<Precision>(u64_of(rq, "bits"));
  if (rq.contains("b")) {
    transcend::ScanOptions so;
    so.lambda_max = u64_of(rq, "lambda_max");
    so.preperiod_max = u64_of(rq, "n0_max");
    so.n_cap = u64_of(rq, "n_cap");
    auto rep = transcend::lnzd_corollary_pipeline(u64_of(rq, "b"), exact_base(rq.at("base")), bits, so);
    return {rep.to_json(), rep.exit_code()};
  }
  json input{{"base", rq.at("base")}};
  json doc{{"kind", "criterion-verdict"}};
  if (rq.contains("automaton")) {
    auto aut = automata::Automaton::from_json(rq.at("automaton"));
    const unsigned m = static_cast<unsigned>(u64_of(rq, "m"));
    auto w = automata::stammer_from_automaton(aut, m);
    input["omega"] = to_string(w.omega());
    input["M"] = to_string(w.m_bound());
    input["provenance"] = "automaton-derived";
    doc["stammer"] = json{{"kind", "stammer-certificate"}, {"automaton", aut.to_json()}, {"m", m},
                          {"witness", w.to_json()}};
  } else {
    input["omega"] = rq.at("omega");
    input["M"] = rq.at("M");
    input["provenance"] = rq.value("provenance", "asserted");
  }
  auto in = transcend::CriterionInput::from_json(input);
  auto v = transcend::check_criterion(in, bits, static_cast<Precision>(u64_of(rq, "cap")));
  doc["input"] = input;
  doc["verdict"] = v.to_json();
  return {doc, status_code(v.status)};
}

Outcome do_alpha(const json& rq) {
  auto a = transcend::eval_alpha(u64_of(rq, "b"), exact_base(rq.at("base")), static_cast<Precision>(u64_of(rq, "bits")));
  return {a.to_json()};
}

Outcome dispatch(const std::string& cmd, const json& rq, unsigned workers) {
  if (cmd == "lnzd") return do_lnzd(rq);
  if (cmd == "sequence") return do_sequence(rq);
  if (cmd == "scan") return do_scan(rq, workers);
  if (cmd == "gelfond") return do_gelfond(rq);
  if (cmd == "witness") return do_witness(rq);
  if (cmd == "expand") return do_expand(rq);
  if (cmd == "periodicity") return do_periodicity(rq);
  if (cmd == "admissible") return do_admissible(rq);
  if (cmd == "pisot") return do_pisot(rq);
  if (cmd == "criterion") return do_criterion(rq);
  if (cmd == "alpha") return do_alpha(rq);
  fail(ErrorKind::parse, "unknown command " + cmd);
}

Outcome emit(const std::string& cmd, const json& rq, unsigned workers) {
  Outcome o = dispatch(cmd, rq, workers);
  o.doc["request"] = json{{"command", cmd}, {"arguments", rq}};
  return o;
}

// ---------------------------------------------------------------- verify

struct Check {
  bool ok;
  std::string detail;
};

Check verify_stammer(const json& j) {
  auto aut = automata::Automaton::from_json(j.at("automaton"));
  auto w = automata::StammerWitness::from_json(j.at("witness"));
  auto prefix = aut.prefix(w.required_length());
  auto r = automata::verify_witness(prefix, w);
  if (!r.ok) return {false, "prefix disagrees at position " + std::to_string(r.mismatch.value_or(0))};
  return {true, "U V^omega is a prefix of the automatic word"};
}

Check verify_by_replay(const json& doc) {
  const json& rq = doc.at("request");
  Outcome again = dispatch(rq.at("command").get<std::string>(), rq.at("arguments"), 1);
  again.doc["request"] = rq;
  if (again.doc != doc) return {false, "recomputation differs from the document"};
  return {true, "recomputed from the recorded request"};
}

Check verify_impl(const json& doc) {
  require(doc.is_object() && doc.contains("kind"), ErrorKind::parse, "document has no kind");
  const std::string kind = doc.at("kind").get<std::string>();
  if (kind == "proof-witness") {
    auto c = lnzd::verify_witness_json(doc);
    return {c.ok, c.detail};
  }
  if (kind == "periodicity-counterexample") {
    bool ok = lnzd::PeriodicityCounterexample::from_json(doc).verify();
    return {ok, ok ? "digits recomputed and differ" : "counterexample does not recompute"};
  }
  if (kind == "periodicity-certificate") {
    auto c = cantor::verify_certificate_json(doc);
    return {c.ok, c.detail};
  }
  if (kind == "periodicity-batch") {
    std::size_t n = 0;
    for (const auto& c : doc.at("certificates")) {
      if (!c.contains("kind")) return {false, "batch entry without certificate"};
      auto r = cantor::verify_certificate_json(c);
      if (!r.ok) return {false, "entry " + std::to_string(n) + ": " + r.detail};
      ++n;
    }
    return {true, std::to_string(n) + " certificates verified"};
  }
  if (kind == "stammer-certificate") return verify_stammer(doc);
  if (kind == "nonperiodicity-scan" && doc.contains("counterexamples")) {
    for (const auto& c : doc.at("counterexamples")) {
      if (!lnzd::PeriodicityCounterexample::from_json(c).verify()) return {false, "cell " + c.dump() + " fails"};
    }
  }
  if (kind == "gelfond-table") {
    const uint64_t b = u64_of(doc, "b"), k = u64_of(doc, "k"), m = u64_of(doc, "m"), x = u64_of(doc, "x");
    auto brute = lnzd::gelfond_table_bruteforce(b, k, m, x);
    if (gelfond_doc(b, k, m, x, brute).at("counts") != doc.at("counts")) return {false, "direct count differs"};
  }
  if (kind == "criterion-verdict" && doc.contains("stammer")) {
    Check s = verify_stammer(doc.at("stammer"));
    if (!s.ok) return s;
  }
  if (!doc.contains("request")) return {false, "no request recorded and no standalone verifier for " + kind};
  return verify_by_replay(doc);
}

// ---------------------------------------------------------------- CLI

Precision default_precision() {
  if (const char* env = std::getenv("CANTRANS_PRECISION")) {
    try {
      long v = std::stol(env);
      if (v >= 16) return static_cast<Precision>(v);
    } catch (const std::exception&) {
    }
    fail(ErrorKind::configuration, "CANTRANS_PRECISION must be an integer >= 16");
  }
  return 128;
}

int error_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::precision:
    case ErrorKind::boundary_undecidable:
    case ErrorKind::witness_not_found:
    case ErrorKind::insufficient_data: return exit_undecided;
    case ErrorKind::internal_consistency: return exit_internal;
    default: return exit_usage;
  }
}

}  // namespace

int verify_document(const json& doc, std::ostream& out) {
  Check c = verify_impl(doc);
  out << json{{"kind", "verification"}, {"document", doc.value("kind", "")}, {"ok", c.ok}, {"detail", c.detail}}.dump(2)
      << "\n";
  return c.ok ? exit_ok : exit_negative;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact Cantor-base expansions, lnzd(n!) digits and transcendence certificates", "cantrans"};
  app.require_subcommand(1);
  app.fallthrough();

  Precision bits = 0;
  unsigned workers = 1;
  std::string output_path;
  std::string isa;
  app.add_option("--bits", bits, "working precision in bits (default: CANTRANS_PRECISION or 128)")
      ->check(CLI::Range(16, 1 << 20));
  app.add_option("--workers", workers, "worker threads for scans")->check(CLI::Range(1, 256));
  app.add_option("--output", output_path, "write the JSON document to this file");
  app.add_option("--isa", isa, "force a kernel set")->check(CLI::IsMember({"scalar", "avx2", "neon"}));

  json rq;
  std::string cmd;
  std::function<void()> build;
  // String-typed options keep big integers exact.
  std::string s_b, s_n, s_i, s_L, s_k, s_m, s_x, s_a, s_r, s_base, s_digits, s_omega, s_M, s_prov, s_number,
      s_poly, s_box, s_auto, s_file;
  uint64_t lambda_max = 50, n0_max = 1000, n_cap = 1000000, cap = 64, u_cand = 16, n_terms = 32,
           max_steps = 1000000, random = 0, max_den = 50, seed = 0, horizon = 0, index = 0, prec_cap = 8192, m_aut = 3;
  bool cells = false;

  auto* c_lnzd = app.add_subcommand("lnzd", "last nonzero digit of n! in base b");
  c_lnzd->add_option("--b", s_b, "base")->required();
  c_lnzd->add_option("--n", s_n, "n (decimal, any size)")->required();

  auto* c_seq = app.add_subcommand("sequence", "lnzd_b(n!) for n = 1..n_max");
  c_seq->add_option("--b", s_b)->required();
  c_seq->add_option("--n", s_n, "n_max")->required();

  auto* c_scan = app.add_subcommand("scan", "counterexamples to eventual periodicity");
  c_scan->add_option("--b", s_b)->required();
  c_scan->add_option("--lambda-max", lambda_max)->capture_default_str()->check(CLI::PositiveNumber);
  c_scan->add_option("--n0-max", n0_max)->capture_default_str()->check(CLI::PositiveNumber);
  c_scan->add_option("--n-cap", n_cap)->capture_default_str()->check(CLI::PositiveNumber);
  c_scan->add_flag("--cells", cells, "include every counterexample");

  auto* c_gel = app.add_subcommand("gelfond", "joint distribution of s_b(n) mod k and n mod m");
  c_gel->add_option("--b", s_b)->required();
  c_gel->add_option("--k", s_k)->required();
  c_gel->add_option("--m", s_m)->required();
  c_gel->add_option("--x", s_x)->required();
  c_gel->add_option("--a", s_a);
  c_gel->add_option("--r", s_r);

  auto* c_wit = app.add_subcommand("witness", "constructive non-periodicity witness");
  c_wit->add_option("--b", s_b)->required();
  c_wit->add_option("--i", s_i)->required();
  c_wit->add_option("--L", s_L)->required();
  c_wit->add_option("--cap", cap, "mu escalation cap")->capture_default_str()->check(CLI::PositiveNumber);
  c_wit->add_option("--u-candidates", u_cand)->capture_default_str()->check(CLI::PositiveNumber);

  auto* c_exp = app.add_subcommand("expand", "greedy Cantor-base expansion");
  c_exp->add_option("--base", s_base, "entries \"2,3\", inline JSON or a JSON file")->required();
  c_exp->add_option("--x", s_x, "rational or field coordinates")->required();
  c_exp->add_option("--n", n_terms)->capture_default_str();

  auto* c_per = app.add_subcommand("periodicity", "certified eventual periodicity");
  c_per->add_option("--base", s_base)->required();
  c_per->add_option("--x", s_x);
  c_per->add_option("--max-steps", max_steps)->capture_default_str()->check(CLI::PositiveNumber);
  c_per->add_option("--random", random, "certify this many random rationals instead of --x");
  c_per->add_option("--max-den", max_den)->capture_default_str()->check(CLI::PositiveNumber);
  c_per->add_option("--seed", seed)->capture_default_str();

  auto* c_adm = app.add_subcommand("admissible", "digit bound for admissible words");
  c_adm->add_option("--base", s_base)->required();
  c_adm->add_option("--digits", s_digits, "comma-separated word to certify");
  c_adm->add_option("--horizon", horizon, "also run the shift-value check up to this index");

  auto* c_pis = app.add_subcommand("pisot", "Pisot / Salem classification");
  c_pis->add_option("--number", s_number, "algebraic number JSON or file");
  c_pis->add_option("--poly", s_poly, "integer coefficients, constant term first");
  c_pis->add_option("--index", index, "root index by decreasing modulus");
  c_pis->add_option("--box", s_box, "real isolating interval lo,hi");
  c_pis->add_option("--cap", prec_cap)->capture_default_str();

  auto* c_cri = app.add_subcommand("criterion", "transcendence criterion or the lnzd pipeline (with --b)");
  c_cri->add_option("--base", s_base)->required();
  c_cri->add_option("--omega", s_omega);
  c_cri->add_option("--M", s_M);
  c_cri->add_option("--provenance", s_prov)->check(CLI::IsMember({"asserted", "automaton-derived"}));
  c_cri->add_option("--automaton", s_auto, "fixture name or automaton JSON");
  c_cri->add_option("--m", m_aut, "block level for automaton stammering")->capture_default_str();
  c_cri->add_option("--b", s_b, "run the lnzd pipeline for this digit base");
  c_cri->add_option("--lambda-max", lambda_max)->capture_default_str();
  c_cri->add_option("--n0-max", n0_max)->capture_default_str();
  c_cri->add_option("--n-cap", n_cap)->capture_default_str();
  c_cri->add_option("--cap", prec_cap)->capture_default_str();

  auto* c_alp = app.add_subcommand("alpha", "certified value of sum lnzd_b(n!) prod beta_k^-1");
  c_alp->add_option("--b", s_b)->required();
  c_alp->add_option("--base", s_base)->required();

  auto* c_ver = app.add_subcommand("verify", "re-check a document emitted by any command");
  c_ver->add_option("file", s_file, "JSON file or - for stdin")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return exit_usage;
  }

  try {
    if (!isa.empty()) {
      simd::Isa want = isa == "avx2" ? simd::Isa::avx2 : isa == "neon" ? simd::Isa::neon : simd::Isa::scalar;
      require(simd::set_active_isa(want) == want, ErrorKind::configuration, "kernel set unavailable: " + isa);
    }
    if (bits == 0) bits = default_precision();
    auto sub = app.get_subcommands().front();
    cmd = sub->get_name();

    if (cmd == "verify") {
      json doc;
      if (s_file == "-") {
        doc = json::parse(std::cin);
      } else {
        std::ifstream in(s_file);
        require(static_cast<bool>(in), ErrorKind::parse, "cannot read " + s_file);
        doc = json::parse(in);
      }
      return verify_document(doc, out);
    }

    if (cmd == "lnzd") rq = {{"b", s_b}, {"n", to_decimal(parse_natural(s_n))}};
    if (cmd == "sequence") rq = {{"b", s_b}, {"n_max", s_n}};
    if (cmd == "scan") rq = {{"b", s_b}, {"lambda_max", lambda_max}, {"n0_max", n0_max}, {"n_cap", n_cap}, {"cells", cells}};
    if (cmd == "gelfond") {
      rq = {{"b", s_b}, {"k", s_k}, {"m", s_m}, {"x", s_x}};
      require(s_a.empty() == s_r.empty(), ErrorKind::parse, "--a and --r go together");
      if (!s_a.empty()) {
        rq["a"] = s_a;
        rq["r"] = s_r;
      }
    }
    if (cmd == "witness") rq = {{"b", s_b}, {"i", s_i}, {"L", to_decimal(parse_natural(s_L))}, {"cap", cap}, {"u_candidates", u_cand}};
    if (cmd == "expand") rq = {{"base", base_spec(s_base)}, {"x", element_spec(s_x)}, {"n", n_terms}, {"bits", bits}};
    if (cmd == "periodicity") {
      rq = {{"base", base_spec(s_base)}, {"max_steps", max_steps}};
      if (random > 0) {
        rq["random"] = random;
        rq["max_den"] = max_den;
        rq["seed"] = seed;
      } else {
        require(!s_x.empty(), ErrorKind::parse, "periodicity needs --x or --random");
        rq["x"] = element_spec(s_x);
      }
    }
    if (cmd == "admissible") {
      rq = {{"base", base_spec(s_base)}, {"bits", bits}};
      if (!s_digits.empty()) rq["digits"] = s_digits;
      if (horizon > 0) rq["horizon"] = horizon;
    }
    if (cmd == "pisot") {
      json num;
      if (!s_number.empty()) {
        num = load_json_arg(s_number);
      } else {
        require(!s_poly.empty(), ErrorKind::parse, "pisot needs --number or --poly");
        num["min_poly"] = split(s_poly, ',');
        if (!s_box.empty()) {
          auto ends = split(s_box, ',');
          require(ends.size() == 2, ErrorKind::parse, "--box needs lo,hi");
          num["root"] = {{"box", ends}};
        } else {
          num["root"] = {{"index_by_magnitude", index}};
        }
      }
      rq = {{"number", num}, {"cap", prec_cap}};
    }
    if (cmd == "criterion") {
      rq = {{"base", base_spec(s_base)}, {"bits", bits}, {"cap", prec_cap}};
      if (!s_b.empty()) {
        rq["b"] = s_b;
        rq["lambda_max"] = lambda_max;
        rq["n0_max"] = n0_max;
        rq["n_cap"] = n_cap;
      } else if (!s_auto.empty()) {
        rq["automaton"] = automaton_spec(s_auto);
        rq["m"] = m_aut;
      } else {
        require(!s_omega.empty() && !s_M.empty(), ErrorKind::parse, "criterion needs --omega and --M, --automaton or --b");
        rq["omega"] = to_string(parse_rational(s_omega));
        rq["M"] = to_string(parse_rational(s_M));
        rq["provenance"] = s_prov.empty() ? "asserted" : s_prov;
      }
    }
    if (cmd == "alpha") rq = {{"b", s_b}, {"base", base_spec(s_base)}, {"bits", bits}};

    Outcome o = emit(cmd, rq, workers);
    if (cmd == "lnzd" && output_path.empty()) {
      out << o.doc.at("lnzd").get<uint64_t>() << "\n";
      return o.code;
    }
    const std::string text = o.doc.dump(2) + "\n";
    if (!output_path.empty()) {
      std::ofstream f(output_path);
      require(static_cast<bool>(f), ErrorKind::configuration, "cannot write " + output_path);
      f << text;
    } else {
      out << text;
    }
    return o.code;
  } catch (const Error& e) {
    err << json{{"error", std::string(to_string(e.kind()))}, {"message", e.what()}}.dump() << "\n";
    return error_code(e.kind());
  } catch (const json::exception& e) {
    err << json{{"error", "parse"}, {"message", e.what()}}.dump() << "\n";
    return exit_usage;
  }
}

}  // namespace cantrans::cli
