#include "cantrans/automata/stammer.hpp"

#include <map>

#include "cantrans/error.hpp"
#include "cantrans/simd/kernels.hpp"

namespace cantrans::automata {

namespace {

// floor(omega) * len + ceil(frac(omega) * len)
std::size_t fractional_power_length(const Rational& omega, std::size_t len) {
  Natural whole;
  Natural rest;
  mpz_fdiv_qr(whole.get_mpz_t(), rest.get_mpz_t(), omega.get_num_mpz_t(), omega.get_den_mpz_t());
  Natural tail = rest * static_cast<unsigned long>(len);
  mpz_cdiv_q(tail.get_mpz_t(), tail.get_mpz_t(), omega.get_den_mpz_t());
  const Natural total = whole * static_cast<unsigned long>(len) + tail;
  require(fits_u64(total), ErrorKind::invalid_parameters, "fractional power length overflows");
  return static_cast<std::size_t>(to_u64(total));
}

nlohmann::json word_to_json(const Word& w) {
  nlohmann::json out = nlohmann::json::array();
  for (Letter x : w) out.push_back(x);
  return out;
}

// Shared scan for both letter types; `mismatch(begin, end, lag)` returns the
// first i in [begin, end) with s[i] != s[i + lag], or end.
template <typename Seq, typename Mismatch>
std::optional<StammerWitness> scan(const Seq& seq, std::size_t min_v, const Rational& omega, const Rational& m_cap,
                                   std::size_t max_v, Mismatch mismatch) {
  require(omega > 1, ErrorKind::invalid_parameters, "omega_target must exceed 1");
  require(m_cap >= 0, ErrorKind::invalid_parameters, "M cap must be nonnegative");
  const std::size_t n = seq.size();
  for (std::size_t v = std::max<std::size_t>(min_v, 1); max_v == 0 || v <= max_v; ++v) {
    const std::size_t power = fractional_power_length(omega, v);
    if (power > n) break;
    for (std::size_t u = 0; Rational(static_cast<unsigned long>(u), static_cast<unsigned long>(v)) <= m_cap; ++u) {
      if (u + power > n) break;
      const std::size_t end = u + power - v;
      if (mismatch(u, end, v) == end) {
        Word uw(seq.begin(), seq.begin() + static_cast<std::ptrdiff_t>(u));
        Word vw(seq.begin() + static_cast<std::ptrdiff_t>(u), seq.begin() + static_cast<std::ptrdiff_t>(u + v));
        return StammerWitness(std::move(uw), std::move(vw), omega, m_cap);
      }
    }
  }
  return std::nullopt;
}

}  // namespace

StammerWitness::StammerWitness(Word u, Word v, Rational omega, Rational m_bound)
    : u_(std::move(u)), v_(std::move(v)), omega_(std::move(omega)), m_bound_(std::move(m_bound)) {
  omega_.canonicalize();
  m_bound_.canonicalize();
  require(!v_.empty(), ErrorKind::invalid_parameters, "stammer witness needs |V| >= 1");
  require(omega_ > 1, ErrorKind::invalid_parameters, "stammer witness needs omega > 1");
  require(m_bound_ >= 0, ErrorKind::invalid_parameters, "stammer witness needs M >= 0");
  require(Rational(static_cast<unsigned long>(u_.size()), static_cast<unsigned long>(v_.size())) <= m_bound_,
          ErrorKind::invalid_parameters, "stammer witness violates |U|/|V| <= M");
}

std::size_t StammerWitness::power_length() const { return fractional_power_length(omega_, v_.size()); }

std::size_t StammerWitness::required_length() const { return u_.size() + power_length(); }

nlohmann::json StammerWitness::to_json() const {
  return {{"kind", "stammer-witness"},
          {"U", word_to_json(u_)},
          {"V", word_to_json(v_)},
          {"omega", to_string(omega_)},
          {"M", to_string(m_bound_)}};
}

StammerWitness StammerWitness::from_json(const nlohmann::json& j) {
  try {
    return StammerWitness(j.at("U").get<Word>(), j.at("V").get<Word>(), parse_rational(j.at("omega").get<std::string>()),
                          parse_rational(j.at("M").get<std::string>()));
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::parse, std::string("stammer witness: ") + e.what());
  }
}

VerifyResult verify_witness(std::span<const Letter> seq_prefix, const StammerWitness& w) {
  const std::size_t need = w.required_length();
  require(seq_prefix.size() >= need, ErrorKind::insufficient_data,
          "sequence prefix has " + std::to_string(seq_prefix.size()) + " letters, witness needs " +
              std::to_string(need));
  const Word& u = w.u();
  const Word& v = w.v();
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (seq_prefix[i] != u[i]) return {false, i};
  }
  const std::size_t power = w.power_length();
  for (std::size_t j = 0; j < power; ++j) {
    if (seq_prefix[u.size() + j] != v[j % v.size()]) return {false, u.size() + j};
  }
  return {true, std::nullopt};
}

StammerWitness stammer_from_automaton(const Automaton& aut, unsigned m) {
  require(m >= 1, ErrorKind::invalid_parameters, "block level must be at least 1");
  const std::size_t nq = aut.state_count();
  // q_i = transition*(q0, (i)_k) for i = 0..|Q|; C_i = B_m(q_i).
  std::vector<std::shared_ptr<const Word>> c(nq + 1);
  for (std::size_t i = 0; i <= nq; ++i) c[i] = aut.block(m, aut.state_of(static_cast<std::uint64_t>(i)));

  std::size_t r = 0;
  std::size_t s = 0;
  for (std::size_t j = 1; j <= nq && s == 0; ++j) {
    for (std::size_t i = 0; i < j; ++i) {
      if (*c[i] == *c[j]) {
        r = i;
        s = j;
        break;
      }
    }
  }
  require(s != 0, ErrorKind::internal_consistency, "no repeated block among C_0..C_|Q|");

  Word u;
  Word v;
  for (std::size_t i = 0; i < r; ++i) u.insert(u.end(), c[i]->begin(), c[i]->end());
  for (std::size_t i = r; i < s; ++i) v.insert(v.end(), c[i]->begin(), c[i]->end());
  StammerWitness w(std::move(u), std::move(v), Rational(1) + Rational(1, static_cast<unsigned long>(nq)),
                   Rational(static_cast<long>(nq) - 1));

  const Word word = aut.prefix(w.required_length());
  const VerifyResult check = verify_witness(word, w);
  require(check.ok, ErrorKind::internal_consistency,
          "automaton stammer witness fails at position " + std::to_string(check.mismatch.value_or(0)));
  return w;
}

std::optional<StammerWitness> empirical_stammer_search(std::span<const std::uint8_t> seq_prefix, std::size_t min_v,
                                                       const Rational& omega_target, const Rational& m_cap,
                                                       std::size_t max_v) {
  auto mismatch = [&](std::size_t begin, std::size_t end, std::size_t lag) {
    return simd::first_mismatch_lag(seq_prefix, begin, end, lag);
  };
  auto found = scan(seq_prefix, min_v, omega_target, m_cap, max_v, mismatch);
  if (found) {
    const Word word(seq_prefix.begin(), seq_prefix.end());
    require(verify_witness(word, *found).ok, ErrorKind::internal_consistency, "empirical witness failed verification");
  }
  return found;
}

std::optional<StammerWitness> empirical_stammer_search(std::span<const Letter> seq_prefix, std::size_t min_v,
                                                       const Rational& omega_target, const Rational& m_cap,
                                                       std::size_t max_v) {
  // Small alphabets go through the byte kernels; letters are mapped back afterwards.
  std::map<Letter, std::uint8_t> code;
  std::vector<Letter> decode;
  std::vector<std::uint8_t> bytes;
  bytes.reserve(seq_prefix.size());
  bool compact = true;
  for (Letter x : seq_prefix) {
    auto it = code.find(x);
    if (it == code.end()) {
      if (decode.size() == 256) {
        compact = false;
        break;
      }
      it = code.emplace(x, static_cast<std::uint8_t>(decode.size())).first;
      decode.push_back(x);
    }
    bytes.push_back(it->second);
  }
  std::optional<StammerWitness> found;
  if (compact) {
    auto mismatch = [&](std::size_t begin, std::size_t end, std::size_t lag) {
      return simd::first_mismatch_lag(bytes, begin, end, lag);
    };
    auto raw = scan(bytes, min_v, omega_target, m_cap, max_v, mismatch);
    if (raw) {
      Word u;
      Word v;
      for (Letter x : raw->u()) u.push_back(decode[static_cast<std::size_t>(x)]);
      for (Letter x : raw->v()) v.push_back(decode[static_cast<std::size_t>(x)]);
      found.emplace(std::move(u), std::move(v), raw->omega(), raw->m_bound());
    }
  } else {
    auto mismatch = [&](std::size_t begin, std::size_t end, std::size_t lag) {
      for (std::size_t i = begin; i < end; ++i) {
        if (seq_prefix[i] != seq_prefix[i + lag]) return i;
      }
      return end;
    };
    found = scan(seq_prefix, min_v, omega_target, m_cap, max_v, mismatch);
  }
  if (found) {
    require(verify_witness(seq_prefix, *found).ok, ErrorKind::internal_consistency,
            "empirical witness failed verification");
  }
  return found;
}

}  // namespace cantrans::automata
