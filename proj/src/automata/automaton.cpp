#include "cantrans/automata/automaton.hpp"

#include <algorithm>
#include <charconv>
#include <optional>

#include "cantrans/error.hpp"

namespace cantrans::automata {

namespace {

std::vector<unsigned> digits_msb_first(Natural n, unsigned k) {
  std::vector<unsigned> out;
  while (n > 0) {
    out.push_back(static_cast<unsigned>(mpz_fdiv_q_ui(n.get_mpz_t(), n.get_mpz_t(), k)));
  }
  std::reverse(out.begin(), out.end());
  return out;
}

std::optional<Letter> integer_letter(const nlohmann::json& v) {
  if (v.is_number_integer()) return v.get<Letter>();
  if (!v.is_string()) return std::nullopt;
  const auto& s = v.get_ref<const std::string&>();
  Letter out = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return out;
}

}  // namespace

Automaton::Automaton(std::vector<std::string> state_names, unsigned k, State initial, std::vector<State> transitions,
                     std::vector<Letter> outputs)
    : names_(std::move(state_names)),
      k_(k),
      initial_(initial),
      transitions_(std::move(transitions)),
      outputs_(std::move(outputs)) {
  require(k_ >= 2, ErrorKind::invalid_base, "automaton radix must be at least 2");
  require(!names_.empty(), ErrorKind::invalid_parameters, "automaton needs at least one state");
  require(initial_ < names_.size(), ErrorKind::invalid_parameters, "initial state out of range");
  require(transitions_.size() == names_.size() * k_, ErrorKind::invalid_parameters,
          "transition table must have |Q| * k entries");
  require(outputs_.size() == names_.size(), ErrorKind::invalid_parameters, "output map must cover every state");
  for (State t : transitions_) {
    require(t < names_.size(), ErrorKind::invalid_parameters, "transition target out of range");
  }
  require(step(initial_, 0) == initial_, ErrorKind::invalid_parameters,
          "transition(q0, 0) must equal q0 (state " + names_[initial_] + ")");
}

Automaton::Automaton(const Automaton& other)
    : names_(other.names_),
      k_(other.k_),
      initial_(other.initial_),
      transitions_(other.transitions_),
      outputs_(other.outputs_) {}

Automaton& Automaton::operator=(const Automaton& other) {
  if (this != &other) {
    names_ = other.names_;
    k_ = other.k_;
    initial_ = other.initial_;
    transitions_ = other.transitions_;
    outputs_ = other.outputs_;
    std::lock_guard lock(cache_mutex_);
    block_cache_.clear();
  }
  return *this;
}

Automaton Automaton::from_json(const nlohmann::json& j) {
  try {
    std::vector<std::string> names = j.at("states").get<std::vector<std::string>>();
    const unsigned k = j.at("k").get<unsigned>();
    require(k >= 2, ErrorKind::invalid_base, "automaton radix must be at least 2");
    std::map<std::string, State> index;
    for (std::size_t i = 0; i < names.size(); ++i) {
      require(index.emplace(names[i], static_cast<State>(i)).second, ErrorKind::parse,
              "duplicate state name " + names[i]);
    }
    auto lookup = [&](const std::string& name) {
      auto it = index.find(name);
      require(it != index.end(), ErrorKind::parse, "unknown state " + name);
      return it->second;
    };
    const State initial = lookup(j.at("initial").get<std::string>());

    std::vector<std::optional<State>> table(names.size() * k);
    for (const auto& [key, target] : j.at("transitions").items()) {
      const auto comma = key.rfind(',');
      require(comma != std::string::npos, ErrorKind::parse, "transition key must be \"state,digit\": " + key);
      const State from = lookup(key.substr(0, comma));
      unsigned digit = 0;
      const std::string digit_text = key.substr(comma + 1);
      auto [ptr, ec] = std::from_chars(digit_text.data(), digit_text.data() + digit_text.size(), digit);
      require(ec == std::errc{} && ptr == digit_text.data() + digit_text.size() && digit < k, ErrorKind::parse,
              "bad digit in transition key " + key);
      table[from * k + digit] = lookup(target.get<std::string>());
    }
    std::vector<State> transitions;
    transitions.reserve(table.size());
    for (std::size_t i = 0; i < table.size(); ++i) {
      require(table[i].has_value(), ErrorKind::parse,
              "missing transition for " + names[i / k] + "," + std::to_string(i % k));
      transitions.push_back(*table[i]);
    }

    const auto& out_json = j.at("outputs");
    std::vector<nlohmann::json> raw(names.size());
    for (std::size_t q = 0; q < names.size(); ++q) {
      require(out_json.contains(names[q]), ErrorKind::parse, "missing output for state " + names[q]);
      raw[q] = out_json.at(names[q]);
    }
    std::vector<Letter> outputs(names.size());
    const bool numeric = std::all_of(raw.begin(), raw.end(), [](const auto& v) { return integer_letter(v).has_value(); });
    if (numeric) {
      for (std::size_t q = 0; q < names.size(); ++q) outputs[q] = *integer_letter(raw[q]);
    } else {
      // Non-numeric alphabets are interned in order of first appearance.
      std::vector<std::string> alphabet;
      for (std::size_t q = 0; q < names.size(); ++q) {
        const std::string s = raw[q].is_string() ? raw[q].get<std::string>() : raw[q].dump();
        auto it = std::find(alphabet.begin(), alphabet.end(), s);
        if (it == alphabet.end()) it = alphabet.insert(alphabet.end(), s);
        outputs[q] = static_cast<Letter>(it - alphabet.begin());
      }
    }
    return Automaton(std::move(names), k, initial, std::move(transitions), std::move(outputs));
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::parse, std::string("automaton descriptor: ") + e.what());
  }
}

nlohmann::json Automaton::to_json() const {
  nlohmann::json j;
  j["states"] = names_;
  j["k"] = k_;
  j["initial"] = names_[initial_];
  nlohmann::json transitions = nlohmann::json::object();
  nlohmann::json outputs = nlohmann::json::object();
  for (State q = 0; q < names_.size(); ++q) {
    for (unsigned d = 0; d < k_; ++d) transitions[names_[q] + "," + std::to_string(d)] = names_[step(q, d)];
    outputs[names_[q]] = outputs_[q];
  }
  j["transitions"] = std::move(transitions);
  j["outputs"] = std::move(outputs);
  return j;
}

State Automaton::run(State q, std::span<const unsigned> digits) const {
  for (unsigned d : digits) {
    require(d < k_, ErrorKind::invalid_parameters, "digit out of range for automaton radix");
    q = step(q, d);
  }
  return q;
}

State Automaton::state_of(const Natural& n) const {
  require_natural(n, "automaton input");
  const auto ds = digits_msb_first(n, k_);
  return run(initial_, ds);
}

State Automaton::state_of(std::uint64_t n) const {
  unsigned buf[64];
  std::size_t len = 0;
  while (n > 0) {
    buf[len++] = static_cast<unsigned>(n % k_);
    n /= k_;
  }
  State q = initial_;
  while (len > 0) q = step(q, buf[--len]);
  return q;
}

Letter Automaton::eval(const Natural& n) const { return outputs_[state_of(n)]; }
Letter Automaton::eval(std::uint64_t n) const { return outputs_[state_of(n)]; }
Letter Automaton::eval_digits(std::span<const unsigned> digits) const { return outputs_[run(initial_, digits)]; }

Word Automaton::prefix(std::size_t length) const {
  Word out(length);
  for (std::size_t n = 0; n < length; ++n) out[n] = eval(static_cast<std::uint64_t>(n));
  return out;
}

std::shared_ptr<const Word> Automaton::block(unsigned m, State q) const {
  require(m >= 1, ErrorKind::invalid_parameters, "block level must be at least 1");
  require(q < names_.size(), ErrorKind::invalid_parameters, "block state out of range");
  std::size_t length = 1;
  for (unsigned i = 0; i < m; ++i) {
    require(length <= max_block_length / k_, ErrorKind::configuration,
            "block length k^m exceeds the cache cap of 2^24 letters");
    length *= k_;
  }
  {
    std::lock_guard lock(cache_mutex_);
    if (auto it = block_cache_.find({m, q}); it != block_cache_.end()) return it->second;
  }
  // B_m(q) = B_{m-1}(step(q,0)) B_{m-1}(step(q,1)) ... ; B_0(q) = output(q).
  auto out = std::make_shared<Word>();
  out->reserve(length);
  if (m == 1) {
    for (unsigned d = 0; d < k_; ++d) out->push_back(outputs_[step(q, d)]);
  } else {
    for (unsigned d = 0; d < k_; ++d) {
      auto sub = block(m - 1, step(q, d));
      out->insert(out->end(), sub->begin(), sub->end());
    }
  }
  std::lock_guard lock(cache_mutex_);
  auto [it, inserted] = block_cache_.emplace(std::pair{m, q}, std::move(out));
  return it->second;
}

namespace {

Automaton two_state_parity(unsigned k, std::vector<State> transitions, std::vector<Letter> outputs,
                           std::vector<std::string> names) {
  return Automaton(std::move(names), k, 0, std::move(transitions), std::move(outputs));
}

}  // namespace

Automaton thue_morse() { return two_state_parity(2, {0, 1, 1, 0}, {0, 1}, {"even", "odd"}); }

Automaton rudin_shapiro() {
  // State tracks (parity of the count of "11" factors, last digit).
  return Automaton({"e0", "e1", "o0", "o1"}, 2, 0, {0, 1, 0, 3, 2, 3, 2, 1}, {1, 1, -1, -1});
}

Automaton baum_sweet() {
  // 1 iff every maximal block of zeros in (n)_2 has even length; a_0 = 1.
  // States: start (no 1 read yet), even run, odd run, dead.
  return Automaton({"start", "even", "odd", "dead"}, 2, 0, {0, 1, 2, 1, 1, 3, 3, 3}, {1, 1, 0, 0});
}

Automaton cantor_ternary() { return two_state_parity(3, {0, 1, 0, 1, 1, 1}, {1, 0}, {"ok", "hit"}); }

}  // namespace cantrans::automata
