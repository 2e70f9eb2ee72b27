#include "cantrans/lnzd/lnzd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>

#include "cantrans/digits/digits.hpp"
#include "cantrans/digits/factorial.hpp"
#include "cantrans/error.hpp"
#include "cantrans/modular.hpp"
#include "cantrans/simd/kernels.hpp"

namespace cantrans::lnzd {

using nlohmann::json;
using std::uint64_t;

namespace {

constexpr uint64_t oracle_prefix_check = 2000;
constexpr uint64_t engine_samples = 8;
constexpr uint64_t find_u_iteration_cap = 10'000'000;

void require_base(uint64_t b) { require(b >= 2, ErrorKind::invalid_base, "base must be at least 2"); }

// Compares a freshly stepped prefix against the oracle and a few points against the engine.
template <typename Lookup>
void spot_check(uint64_t b, uint64_t n_max, Lookup value_at) {
  const uint64_t prefix = std::min(n_max, oracle_prefix_check);
  if (prefix > 0) {
    auto oracle = digits::oracle_lnzd_factorial_prefix(prefix, b);
    for (uint64_t n = 1; n <= prefix; ++n) {
      require(oracle[n - 1] == value_at(n), ErrorKind::internal_consistency,
              "stepped lnzd sequence disagrees with the oracle at n = " + std::to_string(n));
    }
  }
  if (n_max == 0) return;
  digits::LnzdEngine engine(b);
  for (uint64_t s = 1; s <= engine_samples; ++s) {
    uint64_t n = std::max<uint64_t>(1, n_max / engine_samples * s);
    if (s == engine_samples) n = n_max;
    require(engine.lnzd_factorial(from_u64(n)) == value_at(n), ErrorKind::internal_consistency,
            "stepped lnzd sequence disagrees with the engine at n = " + std::to_string(n));
  }
}

std::string dec(const Natural& n) { return to_decimal(n); }

Natural json_natural(const json& j, const char* key) {
  require(j.contains(key), ErrorKind::parse, std::string("missing field ") + key);
  const json& v = j.at(key);
  if (v.is_string()) return parse_natural(v.get<std::string>());
  require(v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0), ErrorKind::parse,
          std::string("field ") + key + " must be a nonnegative integer");
  return from_u64(v.get<uint64_t>());
}

uint64_t json_u64(const json& j, const char* key) {
  Natural n = json_natural(j, key);
  require(fits_u64(n), ErrorKind::parse, std::string("field ") + key + " out of range");
  return to_u64(n);
}

}  // namespace

std::vector<uint8_t> sequence_by_index(uint64_t b, uint64_t n_max) {
  require_base(b);
  require(b <= 256, ErrorKind::invalid_parameters, "byte sequence needs b <= 256");
  std::vector<uint8_t> seq(n_max + 1);
  seq[0] = 1;
  digits::FactorialUnitStepper stepper(b);
  for (uint64_t n = 1; n <= n_max; ++n) seq[n] = static_cast<uint8_t>(stepper.next());
  spot_check(b, n_max, [&](uint64_t n) { return uint64_t{seq[n]}; });
  return seq;
}

std::vector<uint64_t> sequence(uint64_t b, uint64_t n_max) {
  require_base(b);
  std::vector<uint64_t> seq(n_max);
  digits::FactorialUnitStepper stepper(b);
  for (uint64_t n = 1; n <= n_max; ++n) seq[n - 1] = stepper.next();
  spot_check(b, n_max, [&](uint64_t n) { return seq[n - 1]; });
  return seq;
}

json PeriodicityCounterexample::to_json() const {
  return json{{"kind", "periodicity-counterexample"},
              {"b", b},
              {"preperiod", preperiod},
              {"lambda", lambda},
              {"n", n},
              {"lnzd_n", value_n},
              {"lnzd_n_plus_lambda", value_shifted}};
}

PeriodicityCounterexample PeriodicityCounterexample::from_json(const json& j) {
  require(j.is_object() && j.value("kind", "") == "periodicity-counterexample", ErrorKind::parse,
          "expected a periodicity-counterexample object");
  PeriodicityCounterexample c;
  c.b = json_u64(j, "b");
  c.preperiod = json_u64(j, "preperiod");
  c.lambda = json_u64(j, "lambda");
  c.n = json_u64(j, "n");
  c.value_n = json_u64(j, "lnzd_n");
  c.value_shifted = json_u64(j, "lnzd_n_plus_lambda");
  return c;
}

bool PeriodicityCounterexample::verify() const {
  if (b < 3 || lambda < 1 || n < preperiod) return false;
  digits::LnzdEngine engine(b);
  uint64_t x = engine.lnzd_factorial(from_u64(n));
  uint64_t y = engine.lnzd_factorial(from_u64(n) + from_u64(lambda));
  return x == value_n && y == value_shifted && x != y;
}

uint64_t ScanReport::max_counterexample_index() const {
  uint64_t m = 0;
  for (const auto& c : counterexamples) m = std::max(m, c.n + c.lambda);
  return m;
}

json ScanReport::to_json(bool include_cells) const {
  json j{{"kind", "nonperiodicity-scan"},
         {"b", b},
         {"lambda_max", lambda_max},
         {"preperiod_max", preperiod_max},
         {"n_cap", n_cap},
         {"cells", lambda_max * preperiod_max},
         {"counterexamples_found", counterexamples.size()},
         {"exhausted_cells", exhausted.size()},
         {"largest_index_used", max_counterexample_index()}};
  json ex = json::array();
  for (auto [l, n0] : exhausted) ex.push_back(json{{"lambda", l}, {"preperiod", n0}});
  j["exhausted"] = ex;
  if (include_cells) {
    json cells = json::array();
    for (const auto& c : counterexamples) cells.push_back(c.to_json());
    j["counterexamples"] = cells;
  }
  return j;
}

ScanReport scan_nonperiodicity(uint64_t b, uint64_t lambda_max, uint64_t preperiod_max, uint64_t n_cap,
                               unsigned workers) {
  require(b > 2, ErrorKind::invalid_base, "the lnzd sequence is periodic for b = 2; scanning needs b > 2");
  require(lambda_max >= 1 && preperiod_max >= 1, ErrorKind::invalid_parameters, "empty scan grid");
  ScanReport report{b, lambda_max, preperiod_max, n_cap, {}, {}};

  std::vector<uint8_t> bytes;
  std::vector<uint64_t> wide;
  if (b <= 256) {
    bytes = sequence_by_index(b, n_cap);
  } else {
    wide.reserve(n_cap + 1);
    wide.push_back(1);
    auto tail = sequence(b, n_cap);
    wide.insert(wide.end(), tail.begin(), tail.end());
  }
  auto value = [&](uint64_t n) { return bytes.empty() ? wide[n] : uint64_t{bytes[n]}; };
  auto mismatch = [&](uint64_t begin, uint64_t end, uint64_t lag) -> uint64_t {
    if (!bytes.empty()) return simd::first_mismatch_lag(bytes, begin, end, lag);
    for (uint64_t n = begin; n < end; ++n)
      if (wide[n] != wide[n + lag]) return n;
    return end;
  };

  struct Row {
    std::vector<PeriodicityCounterexample> found;
    std::vector<std::pair<uint64_t, uint64_t>> exhausted;
  };
  std::vector<Row> rows(lambda_max);
  auto scan_lambda = [&](uint64_t lambda) {
    Row& row = rows[lambda - 1];
    if (lambda > n_cap) {
      for (uint64_t n0 = 1; n0 <= preperiod_max; ++n0) row.exhausted.emplace_back(lambda, n0);
      return;
    }
    const uint64_t end = n_cap - lambda + 1;
    uint64_t next = 0;  // smallest mismatch >= previous N0; reused while it stays >= N0
    bool have = false;
    for (uint64_t n0 = 1; n0 <= preperiod_max; ++n0) {
      if (!have || next < n0) {
        next = n0 >= end ? end : mismatch(n0, end, lambda);
        have = true;
      }
      if (next >= end) {
        for (uint64_t r = n0; r <= preperiod_max; ++r) row.exhausted.emplace_back(lambda, r);
        return;
      }
      row.found.push_back({b, n0, lambda, next, value(next), value(next + lambda)});
    }
  };

  workers = std::max(1U, workers);
  if (workers == 1) {
    for (uint64_t l = 1; l <= lambda_max; ++l) scan_lambda(l);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (uint64_t l = 1 + w; l <= lambda_max; l += workers) scan_lambda(l);
      });
    }
    for (auto& t : pool) t.join();
  }
  for (auto& row : rows) {
    report.counterexamples.insert(report.counterexamples.end(), row.found.begin(), row.found.end());
    report.exhausted.insert(report.exhausted.end(), row.exhausted.begin(), row.exhausted.end());
  }
  return report;
}

namespace {

void require_table(uint64_t b, uint64_t k, uint64_t m) {
  require_base(b);
  require(k >= 1 && m >= 1, ErrorKind::invalid_parameters, "k and m must be positive");
}

void require_gelfond(uint64_t b, uint64_t k, uint64_t m) {
  require_base(b);
  require(k >= 2 && m >= 2, ErrorKind::invalid_parameters, "k and m must be at least 2");
  require(modular::gcd(k, b - 1) == 1, ErrorKind::invalid_parameters, "gcd(k, b - 1) must be 1");
}

}  // namespace

std::vector<uint64_t> gelfond_table_bruteforce(uint64_t b, uint64_t k, uint64_t m, uint64_t x) {
  require_table(b, k, m);
  std::vector<uint64_t> counts(k * m, 0);
  for (uint64_t n = 0; n < x; ++n) ++counts[(digits::digit_sum(n, b) % k) * m + n % m];
  return counts;
}

std::vector<uint64_t> gelfond_table(uint64_t b, uint64_t k, uint64_t m, uint64_t x) {
  require_table(b, k, m);
  if (k > 255) return gelfond_table_bruteforce(b, k, m, x);
  std::vector<uint64_t> counts(k * m, 0);
  if (x == 0) return counts;

  uint64_t block = 1;
  while (block < 4096 / b + 1 && block < x) block *= b;
  std::vector<uint8_t> low_sum(block), shifted(block);
  std::vector<uint64_t> low_mod(block);
  for (uint64_t l = 0; l < block; ++l) {
    low_sum[l] = static_cast<uint8_t>(digits::digit_sum(l, b) % k);
    low_mod[l] = l % m;
  }
  const uint64_t block_mod = block % m;
  uint64_t start_mod = 0;
  for (uint64_t h = 0; h * block < x; ++h) {
    const auto shift = static_cast<uint8_t>(digits::digit_sum(h, b) % k);
    simd::add_mod(low_sum, shift, static_cast<uint8_t>(k), shifted);
    const uint64_t len = std::min(block, x - h * block);
    for (uint64_t l = 0; l < len; ++l) {
      uint64_t r = start_mod + low_mod[l];
      if (r >= m) r -= m;
      ++counts[shifted[l] * m + r];
    }
    start_mod += block_mod;
    if (start_mod >= m) start_mod -= m;
  }
  return counts;
}

GelfondStat gelfond_statistic(uint64_t b, uint64_t k, uint64_t m, uint64_t a, uint64_t r, uint64_t x) {
  require_gelfond(b, k, m);
  require(x >= 1, ErrorKind::invalid_parameters, "x must be positive");
  auto counts = gelfond_table(b, k, m, x);
  GelfondStat s;
  s.count = counts[(a % k) * m + r % m];
  s.expected = Rational(from_u64(x), from_u64(k) * from_u64(m));
  s.expected.canonicalize();
  Rational dev = (Rational(from_u64(s.count)) - s.expected) / s.expected;
  s.deviation = std::fabs(dev.get_d());
  return s;
}

std::optional<Natural> find_u(uint64_t q, double alpha, uint64_t mu, uint64_t k, const Natural& m, uint64_t skip) {
  require(q >= 2 && k >= 1 && m >= 1, ErrorKind::invalid_parameters, "find_u needs q >= 2, k >= 1, m >= 1");
  require(alpha > 0 && alpha <= 1, ErrorKind::invalid_parameters, "alpha must lie in (0, 1]");
  Natural bound;
  mpz_ui_pow_ui(bound.get_mpz_t(), q, static_cast<unsigned long>(std::ceil(alpha * static_cast<double>(mu))));
  Natural u = m >= 2 ? Natural(m - 1) : Natural(1);
  const uint64_t target = k - 1;  // -1 mod k
  for (uint64_t it = 0; it < find_u_iteration_cap && u <= bound; ++it, u += m) {
    uint64_t s = fits_u64(u) ? digits::digit_sum(to_u64(u), q) % k : mod_u64(digits::digit_sum(u, q), k);
    if (s == target) {
      if (skip == 0) return u;
      --skip;
    }
  }
  return std::nullopt;
}

namespace {

struct Setup {
  digits::BaseFactorization bf;
  uint64_t q = 0;
  unsigned a = 0;
  uint64_t K = 1;
  uint64_t c = 1;
  uint64_t c2 = 1;
  uint64_t k = 1;
  Natural m = 1;
  uint64_t mu0 = 1;
  uint64_t kappa = 2;
  double alpha = 1;
};

Setup make_setup(uint64_t b, unsigned i) {
  require(b > 2, ErrorKind::invalid_base, "witnesses need b > 2");
  Setup s{digits::BaseFactorization::of(b)};
  const auto& lead = s.bf.leading();
  s.q = lead.p;
  s.a = lead.a;
  s.K = b / lead.modulus;

  const unsigned vqa = modular::valuation(s.a, s.q);
  uint64_t qpart = 1;
  for (unsigned t = 0; t < vqa; ++t) qpart *= s.q;
  s.c = s.a / qpart;
  // c1 collects the full prime-power part of c over primes dividing q - 1.
  uint64_t c1 = 1;
  for (auto [p, e] : modular::factorize(s.c)) {
    if ((s.q - 1) % p == 0)
      for (unsigned t = 0; t < e; ++t) c1 *= p;
  }
  s.c2 = s.c / c1;
  s.k = qpart * s.c2;
  Natural Ki;
  mpz_ui_pow_ui(Ki.get_mpz_t(), s.K, i);
  mpz_lcm(s.m.get_mpz_t(), from_u64(s.c2).get_mpz_t(), Ki.get_mpz_t());

  s.mu0 = modular::lcm(s.a, modular::multiplicative_order(s.q, s.c));
  s.kappa = s.q == 2 ? 1 + (uint64_t{1} << (s.a - 1)) : 2;

  // alpha: 1 when the Theta maximum is attained once, otherwise a 10% margin below the gap.
  const auto& fs = s.bf.factors();
  double ratio = -1;
  for (std::size_t j = 1; j < fs.size(); ++j) {
    if (fs[j].theta() != lead.theta()) continue;
    double r = fs[j].a * std::log(static_cast<double>(fs[j].p)) / (s.a * std::log(static_cast<double>(s.q)));
    ratio = ratio < 0 ? r : std::min(ratio, r);
  }
  if (ratio > 0) s.alpha = std::min(1.0, 0.9 * (ratio - 1));
  return s;
}

Natural pow_nat(uint64_t base, uint64_t e) {
  Natural r;
  mpz_ui_pow_ui(r.get_mpz_t(), base, static_cast<unsigned long>(e));
  return r;
}

}  // namespace

ProofWitness evaluate_witness(uint64_t b, unsigned i, const Natural& L, uint64_t mu, const Natural& u) {
  Setup s = make_setup(b, i);
  require(L >= 1 && mpz_gcd_ui(nullptr, L.get_mpz_t(), b) == 1, ErrorKind::invalid_parameters,
          "L must be positive and coprime to b");
  require(u >= 1, ErrorKind::invalid_parameters, "u must be positive");
  require(mu >= 1, ErrorKind::invalid_parameters, "mu must be positive");

  ProofWitness w;
  w.b = b;
  w.q = s.q;
  w.a = s.a;
  w.K = s.K;
  w.i = i;
  w.L = L;
  w.mu0 = s.mu0;
  w.mu = mu;
  w.alpha = s.alpha;
  w.k = s.k;
  w.m = s.m;
  w.u = u;
  w.kappa = s.kappa;
  w.n0 = pow_nat(s.q, mu) * (1 + u) - 1;
  w.lambda = pow_nat(b, i) * L;
  w.A = w.n0 + w.lambda;
  w.B = w.n0 + Natural(from_u64(s.kappa)) * w.lambda;

  digits::LnzdEngine engine(s.bf);
  const uint64_t qa = s.bf.leading().modulus;

  const Natural vq = digits::legendre_valuation_factorial(w.n0, s.q);
  const bool f1 = mod_u64(vq, s.a) == 0;
  w.facts.push_back({"vq_n0_fact_mod_a", f1, "v_q(n0!) = " + dec(vq)});

  Natural min_ratio;
  bool first = true;
  for (const auto& f : s.bf.factors()) {
    Natural v = digits::legendre_valuation_factorial(w.n0, f.p) / f.a;
    if (first || v < min_ratio) min_ratio = v;
    first = false;
  }
  const Natural vb = engine.factorial_valuation(w.n0);
  const bool f2 = f1 && vb == vq / s.a && vb == min_ratio;
  w.facts.push_back({"claim_vb_n0_fact", f2, "v_b(n0!) = " + dec(vb) + ", min_j floor(v_pj/a_j) = " + dec(min_ratio)});

  const Natural A1 = w.A + 1, B1 = w.B + 1;
  const Natural vA = digits::valuation(A1, b), vB = digits::valuation(B1, b);
  const bool f3 = vA == i && vB == i;
  w.facts.push_back({"vb_A1_B1_eq_i", f3, "v_b(A+1) = " + dec(vA) + ", v_b(B+1) = " + dec(vB)});

  const uint64_t dA = digits::lnzd(A1, b), dB = digits::lnzd(B1, b);
  const uint64_t Lq = mod_u64(L, qa);
  const bool f4 = dA % qa == Lq;
  w.facts.push_back({"lnzd_A1_congruent_L", f4,
                     "lnzd(A+1) = " + std::to_string(dA) + ", L mod q^a = " + std::to_string(Lq)});
  const uint64_t kLq = modular::mul_mod(s.kappa % qa, Lq, qa);
  const bool f5 = dB % qa == kLq;
  w.facts.push_back({"lnzd_B1_congruent_kappaL", f5,
                     "lnzd(B+1) = " + std::to_string(dB) + ", kappa L mod q^a = " + std::to_string(kLq)});

  const uint64_t xA = engine.lnzd_factorial(A1), xB = engine.lnzd_factorial(B1);
  const bool f6 = xA != xB;
  w.facts.push_back({"lnzd_factorials_differ", f6,
                     "lnzd((A+1)!) = " + std::to_string(xA) + ", lnzd((B+1)!) = " + std::to_string(xB)});

  const uint64_t x0 = engine.lnzd_factorial(w.n0);
  w.refutes_period = f6 || engine.lnzd_factorial(w.A) != x0 || engine.lnzd_factorial(w.B) != x0;
  return w;
}

bool ProofWitness::all_facts_hold() const {
  return facts.size() == 6 && std::all_of(facts.begin(), facts.end(), [](const LedgerFact& f) { return f.holds; });
}

json ProofWitness::to_json() const {
  json checks = json::object();
  json details = json::object();
  for (const auto& f : facts) {
    checks[f.name] = f.holds;
    details[f.name] = f.detail;
  }
  return json{{"kind", "proof-witness"},
              {"b", b},
              {"q", q},
              {"a", a},
              {"K", K},
              {"i", i},
              {"L", dec(L)},
              {"mu0", mu0},
              {"mu", mu},
              {"alpha", alpha},
              {"k", k},
              {"m", dec(m)},
              {"u", dec(u)},
              {"n0", dec(n0)},
              {"kappa", kappa},
              {"lambda", dec(lambda)},
              {"A", dec(A)},
              {"B", dec(B)},
              {"escalations", escalations},
              {"u_rank", u_rank},
              {"checks", checks},
              {"details", details},
              {"refutes_period", refutes_period}};
}

ProofWitness build_witness(uint64_t b, unsigned i, const Natural& L, unsigned escalation_cap, unsigned u_candidates) {
  Setup s = make_setup(b, i);
  require(L >= 1 && mpz_gcd_ui(nullptr, L.get_mpz_t(), b) == 1, ErrorKind::invalid_parameters,
          "L must be positive and coprime to b");
  std::string last_failure = "no admissible u";
  for (unsigned esc = 0; esc <= escalation_cap; ++esc) {
    const uint64_t mu = (uint64_t{i} + 1 + esc) * s.mu0;
    for (unsigned rank = 0; rank < u_candidates; ++rank) {
      auto u = find_u(s.q, s.alpha, mu, s.k, s.m, rank);
      if (!u) break;
      ProofWitness w = evaluate_witness(b, i, L, mu, *u);
      w.escalations = esc;
      w.u_rank = rank;
      if (w.all_facts_hold()) return w;
      for (const auto& f : w.facts) {
        if (!f.holds) {
          last_failure = "mu = " + std::to_string(mu) + ", u = " + dec(*u) + ": " + f.name + " fails (" + f.detail + ")";
          break;
        }
      }
    }
  }
  fail(ErrorKind::witness_not_found,
       "escalation cap " + std::to_string(escalation_cap) + " reached for b = " + std::to_string(b) +
           ", i = " + std::to_string(i) + "; last attempt " + last_failure);
}

WitnessCheck verify_witness_json(const json& j) {
  WitnessCheck out;
  try {
    require(j.is_object() && j.value("kind", "") == "proof-witness", ErrorKind::parse,
            "expected a proof-witness object");
    const uint64_t b = json_u64(j, "b");
    const uint64_t i = json_u64(j, "i");
    require(i <= 4096, ErrorKind::parse, "i out of range");
    ProofWitness w = evaluate_witness(b, static_cast<unsigned>(i), json_natural(j, "L"), json_u64(j, "mu"),
                                      json_natural(j, "u"));
    auto mismatch = [&](const char* key, const Natural& expect) {
      return j.contains(key) && json_natural(j, key) != expect;
    };
    if (mismatch("q", from_u64(w.q)) || mismatch("a", from_u64(w.a)) || mismatch("K", from_u64(w.K)) ||
        mismatch("kappa", from_u64(w.kappa)) || mismatch("n0", w.n0) || mismatch("A", w.A) || mismatch("B", w.B)) {
      out.detail = "derived fields do not match (b, i, L, mu, u)";
      return out;
    }
    for (const auto& f : w.facts) {
      if (!f.holds) {
        out.detail = f.name + " fails: " + f.detail;
        return out;
      }
      if (j.contains("checks") && j["checks"].contains(f.name) && !j["checks"][f.name].get<bool>()) {
        out.detail = f.name + " recorded false but recomputes true";
        return out;
      }
    }
    out.ok = true;
    out.detail = "all six ledger facts recomputed";
  } catch (const Error& e) {
    out.detail = e.what();
  } catch (const json::exception& e) {
    out.detail = std::string("parse: ") + e.what();
  }
  return out;
}

}  // namespace cantrans::lnzd
