#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "cantrans/cantor/cantor.hpp"
#include "cantrans/natural.hpp"
#include "cantrans/numeric/interval.hpp"

namespace cantrans::transcend {

using numeric::Interval;
using numeric::Precision;

enum class Status { holds, fails, undecided };
std::string_view to_string(Status s) noexcept;

enum class Provenance { automaton, asserted };
std::string_view to_string(Provenance p) noexcept;

struct CriterionInput {
  cantor::CantorBase base;  // exact entries
  Rational omega;           // > 1
  Rational m_bound;         // >= 0
  Provenance provenance = Provenance::asserted;

  // Throws invalid_parameters for inexact bases, omega <= 1 or M < 0.
  void validate() const;
  static CriterionInput from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

struct Verdict {
  Status status = Status::undecided;
  Rational lhs;  // (omega + M) / (1 + M)
  Interval rhs;  // F_S(delta) / log|delta|_w
  bool pisot_shortcut = false;
  std::string delta_class;
  bool conditional = false;  // asserted stammering
  Precision precision = 0;
  std::string conclusion;

  nlohmann::json to_json() const;
};

// Compares lhs with the certified rhs; escalates precision from `bits` by
// doubling up to `cap` before reporting undecided.
Verdict check_criterion(const CriterionInput& input, Precision bits = 128, Precision cap = 8192);

struct ScanOptions {
  std::uint64_t lambda_max = 10;
  std::uint64_t preperiod_max = 100;
  std::uint64_t n_cap = 100000;
  unsigned workers = 1;
};

struct Stage {
  std::string name;
  Status status = Status::undecided;
  std::string detail;
  nlohmann::json values = nlohmann::json::object();
};

struct PipelineReport {
  std::uint64_t b = 0;
  std::string base;
  std::vector<Stage> stages;
  std::string verdict;  // "transcendental", "rejected", "undecided"
  std::string failing_stage;
  std::vector<std::string> logic;

  const Stage& stage(std::string_view name) const;
  int exit_code() const;  // 0 transcendental, 2 rejected, 3 undecided
  nlohmann::json to_json() const;
};

// Stages: automaticity, pisot, digit-bound (all certified), then
// non-periodicity evidence from a scan (corroboration only).
PipelineReport lnzd_corollary_pipeline(std::uint64_t b, const cantor::CantorBase& base, Precision bits = 128,
                                       const ScanOptions& scan = {});

struct AlphaValue {
  Interval enclosure;
  Interval partial;
  std::size_t terms = 0;
  Interval tail;  // [0, bound]
  bool constant_digits = false;
  std::string note;

  nlohmann::json to_json() const;
};

// sum_{n <= N} lnzd_b(n!) prod_{k <= n} beta_k^{-1} plus the tail
// (b - 1) delta^{-floor(N/p)} s(delta) sum_{r=1}^{p} beta_min^{-r}, with N a
// multiple of p chosen so the enclosure is narrower than 2^-bits.
AlphaValue eval_alpha(std::uint64_t b, const cantor::CantorBase& base, Precision bits);

// s(x) = x / (x - 1)
Interval s_of(const Interval& x);

nlohmann::json interval_json(const Interval& x, int digits = 40);

}  // namespace cantrans::transcend
