#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "cantrans/natural.hpp"

namespace cantrans::automata {

using Letter = std::int64_t;
using Word = std::vector<Letter>;
using State = std::uint32_t;

// A k-automaton (Q, {0..k-1}, transition, q0, Delta, output) with
// transition(q0, 0) = q0. The automatic word it generates is
// a_n = output(transition*(q0, (n)_k)) read most-significant digit first;
// a_0 = output(q0) corresponds to the empty digit string.
class Automaton {
 public:
  // transitions[q * k + d] is the successor of q on digit d.
  Automaton(std::vector<std::string> state_names, unsigned k, State initial, std::vector<State> transitions,
            std::vector<Letter> outputs);

  Automaton(const Automaton& other);
  Automaton& operator=(const Automaton& other);

  static Automaton from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  std::size_t state_count() const { return names_.size(); }
  unsigned radix() const { return k_; }
  State initial() const { return initial_; }
  State step(State q, unsigned digit) const { return transitions_[q * k_ + digit]; }
  Letter output(State q) const { return outputs_[q]; }
  const std::string& name(State q) const { return names_[q]; }

  // State reached from q on the given digits (most significant first).
  State run(State q, std::span<const unsigned> digits) const;
  // State transition*(q0, (n)_k).
  State state_of(const Natural& n) const;
  State state_of(std::uint64_t n) const;

  Letter eval(const Natural& n) const;
  Letter eval(std::uint64_t n) const;
  // Feeds an explicit digit string from q0; used to check leading-zero invariance.
  Letter eval_digits(std::span<const unsigned> digits) const;

  // a_0 .. a_{length-1}, computed letter by letter through eval.
  Word prefix(std::size_t length) const;

  // B_m(q): entry r (0-based) is output(transition*(q, r written with exactly
  // m base-k digits)). Cached per (m, q); k^m is capped at max_block_length.
  static constexpr std::size_t max_block_length = std::size_t{1} << 24;
  std::shared_ptr<const Word> block(unsigned m, State q) const;

 private:
  std::vector<std::string> names_;
  unsigned k_;
  State initial_;
  std::vector<State> transitions_;
  std::vector<Letter> outputs_;

  mutable std::mutex cache_mutex_;
  mutable std::map<std::pair<unsigned, State>, std::shared_ptr<const Word>> block_cache_;
};

// Fixture automata used throughout the tests and the CLI.
Automaton thue_morse();
Automaton rudin_shapiro();
Automaton baum_sweet();
Automaton cantor_ternary();  // 1 iff the base-3 expansion has no digit 1

}  // namespace cantrans::automata
