#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "cantrans/natural.hpp"

namespace cantrans::lnzd {

// lnzd_b(n!) for n = 1..n_max (entry n - 1). The first terms are checked
// against the big-integer oracle and a sparse sample against the
// arbitrary-n engine.
std::vector<std::uint64_t> sequence(std::uint64_t b, std::uint64_t n_max);

// Same values indexed directly by n (entry 0 holds lnzd_b(0!) = 1); b <= 256.
std::vector<std::uint8_t> sequence_by_index(std::uint64_t b, std::uint64_t n_max);

struct PeriodicityCounterexample {
  std::uint64_t b = 0;
  std::uint64_t preperiod = 0;  // claimed N0
  std::uint64_t lambda = 0;     // claimed period
  std::uint64_t n = 0;          // n >= N0 with lnzd((n + lambda)!) != lnzd(n!)
  std::uint64_t value_n = 0;
  std::uint64_t value_shifted = 0;

  nlohmann::json to_json() const;
  static PeriodicityCounterexample from_json(const nlohmann::json& j);
  // Re-evaluates both digits with the arbitrary-n engine.
  bool verify() const;
};

struct ScanReport {
  std::uint64_t b = 0;
  std::uint64_t lambda_max = 0;
  std::uint64_t preperiod_max = 0;
  std::uint64_t n_cap = 0;
  // Sorted by (lambda, N0).
  std::vector<PeriodicityCounterexample> counterexamples;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> exhausted;  // (lambda, N0) with no counterexample <= n_cap

  std::uint64_t max_counterexample_index() const;
  nlohmann::json to_json(bool include_cells) const;
};

// For every lambda <= lambda_max and N0 <= preperiod_max, the smallest
// n >= N0 with n + lambda <= n_cap and lnzd_b((n + lambda)!) != lnzd_b(n!).
// Work is split over lambda; the result does not depend on `workers`.
ScanReport scan_nonperiodicity(std::uint64_t b, std::uint64_t lambda_max, std::uint64_t preperiod_max,
                               std::uint64_t n_cap, unsigned workers = 1);

struct GelfondStat {
  std::uint64_t count = 0;
  Rational expected;  // x / (k m)
  double deviation = 0;  // |count - expected| / expected
};

// counts[a * m + r] = #{0 <= n < x : s_b(n) = a (mod k), n = r (mod m)}.
// Blockwise: n = h T + l with T a power of b, so s_b(n) = s_b(h) + s_b(l).
// The tables are plain counts and do not enforce gcd(k, b - 1) = 1.
std::vector<std::uint64_t> gelfond_table(std::uint64_t b, std::uint64_t k, std::uint64_t m, std::uint64_t x);
std::vector<std::uint64_t> gelfond_table_bruteforce(std::uint64_t b, std::uint64_t k, std::uint64_t m, std::uint64_t x);
// Requires k, m >= 2 and gcd(k, b - 1) = 1.
GelfondStat gelfond_statistic(std::uint64_t b, std::uint64_t k, std::uint64_t m, std::uint64_t a, std::uint64_t r,
                              std::uint64_t x);

// Smallest u >= 1 with u = -1 (mod m) and s_q(u) = -1 (mod k), u <= q^ceil(alpha mu).
std::optional<Natural> find_u(std::uint64_t q, double alpha, std::uint64_t mu, std::uint64_t k, const Natural& m,
                              std::uint64_t skip = 0);

struct LedgerFact {
  std::string name;
  bool holds = false;
  std::string detail;
};

struct ProofWitness {
  std::uint64_t b = 0;
  std::uint64_t q = 0;
  unsigned a = 0;
  std::uint64_t K = 0;
  unsigned i = 0;
  Natural L;
  std::uint64_t mu0 = 0;
  std::uint64_t mu = 0;
  double alpha = 1;
  std::uint64_t k = 1;
  Natural m = 1;
  Natural u;
  Natural n0;
  std::uint64_t kappa = 0;
  Natural lambda;
  Natural A;
  Natural B;
  unsigned escalations = 0;  // extra multiples of mu0 beyond (i + 1) mu0
  unsigned u_rank = 0;       // which admissible u (0 = smallest)
  std::vector<LedgerFact> facts;
  bool refutes_period = false;

  bool all_facts_hold() const;
  nlohmann::json to_json() const;
};

// The six ledger facts plus the derived values, recomputed from (b, i, L, mu, u).
ProofWitness evaluate_witness(std::uint64_t b, unsigned i, const Natural& L, std::uint64_t mu, const Natural& u);

// Escalates mu by mu0 (and walks admissible u) until all six facts hold.
ProofWitness build_witness(std::uint64_t b, unsigned i, const Natural& L, unsigned escalation_cap = 64,
                           unsigned u_candidates = 16);

struct WitnessCheck {
  bool ok = false;
  std::string detail;
};
WitnessCheck verify_witness_json(const nlohmann::json& j);

}  // namespace cantrans::lnzd
