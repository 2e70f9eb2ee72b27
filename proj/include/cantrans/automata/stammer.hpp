#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include "json.hpp"

#include "cantrans/automata/automaton.hpp"
#include "cantrans/natural.hpp"

namespace cantrans::automata {

// U V^omega with |U| / |V| <= m_bound. V^omega means floor(omega) copies of V
// followed by the prefix of V of length ceil(frac(omega) |V|).
class StammerWitness {
 public:
  // Throws invalid_parameters unless |V| >= 1, omega > 1, m_bound >= 0 and
  // |U| / |V| <= m_bound.
  StammerWitness(Word u, Word v, Rational omega, Rational m_bound);

  const Word& u() const { return u_; }
  const Word& v() const { return v_; }
  const Rational& omega() const { return omega_; }
  const Rational& m_bound() const { return m_bound_; }

  // |V^omega|
  std::size_t power_length() const;
  // |U| + |V^omega|
  std::size_t required_length() const;

  nlohmann::json to_json() const;
  static StammerWitness from_json(const nlohmann::json& j);

 private:
  Word u_;
  Word v_;
  Rational omega_;
  Rational m_bound_;
};

struct VerifyResult {
  bool ok = false;
  std::optional<std::size_t> mismatch;  // first position in seq_prefix that disagrees
};

// Throws insufficient_data if seq_prefix is shorter than w.required_length().
VerifyResult verify_witness(std::span<const Letter> seq_prefix, const StammerWitness& w);

// Block decomposition C_0 C_1 ... of the automatic word with blocks B_m(q_i),
// q_i = transition*(q0, (i)_k), and the first pigeonhole repeat among
// C_0..C_{|Q|}. omega = 1 + 1/|Q|, M = |Q| - 1. The witness is checked
// against an independent evaluation of the word before it is returned.
StammerWitness stammer_from_automaton(const Automaton& aut, unsigned m);

// Witnesses for m = 1, 2, ... produced on demand.
class StammerFamily {
 public:
  explicit StammerFamily(Automaton aut) : aut_(std::move(aut)) {}

  StammerWitness witness(unsigned m) const { return stammer_from_automaton(aut_, m); }
  Rational omega() const { return Rational(1) + Rational(1, static_cast<unsigned long>(aut_.state_count())); }
  Rational m_bound() const { return Rational(static_cast<long>(aut_.state_count()) - 1); }
  const Automaton& automaton() const { return aut_; }

 private:
  Automaton aut_;
};

// Scans |V| = min_v, min_v + 1, ... and for each |V| the prefix length |U| =
// 0, 1, ... up to m_cap |V|, returning the first pair for which U V^omega is
// a prefix of seq_prefix. max_v = 0 means no upper limit other than the data.
std::optional<StammerWitness> empirical_stammer_search(std::span<const std::uint8_t> seq_prefix, std::size_t min_v,
                                                       const Rational& omega_target, const Rational& m_cap = 10,
                                                       std::size_t max_v = 0);
std::optional<StammerWitness> empirical_stammer_search(std::span<const Letter> seq_prefix, std::size_t min_v,
                                                       const Rational& omega_target, const Rational& m_cap = 10,
                                                       std::size_t max_v = 0);

}  // namespace cantrans::automata
