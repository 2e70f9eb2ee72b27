#include <algorithm>

#include "doctest.h"

#include "cantrans/digits/factorial.hpp"
#include "cantrans/error.hpp"
#include "cantrans/lnzd/lnzd.hpp"
#include "oracles.hpp"

using namespace cantrans;
using namespace cantrans::lnzd;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::internal_consistency;
}

// Smallest n >= n0 with x(n + lambda) != x(n), x indexed from n = 1.
std::optional<std::uint64_t> first_break(const std::vector<unsigned long>& x, std::uint64_t lambda, std::uint64_t n0) {
  for (std::uint64_t n = n0; n + lambda <= x.size(); ++n)
    if (x[n - 1] != x[n + lambda - 1]) return n;
  return std::nullopt;
}

std::vector<std::uint64_t> gelfond_oracle(std::uint64_t b, std::uint64_t k, std::uint64_t m, std::uint64_t x) {
  std::vector<std::uint64_t> c(k * m, 0);
  for (std::uint64_t n = 0; n < x; ++n) ++c[(oracle::digit_sum(n, b) % k) * m + n % m];
  return c;
}

}  // namespace

TEST_CASE("sequence examples") {
  auto s10 = sequence(10, 10);
  CHECK(s10 == std::vector<std::uint64_t>{1, 2, 6, 4, 2, 2, 4, 2, 8, 8});
  auto s2 = sequence(2, 5000);
  CHECK(std::all_of(s2.begin(), s2.end(), [](auto v) { return v == 1; }));
  auto by = sequence_by_index(12, 100);
  CHECK(by[0] == 1);
  for (unsigned b : {3u, 6u, 7u, 12u, 30u}) {
    auto ref = oracle::lnzd_factorial_prefix(3000, b);
    auto got = sequence(b, 3000);
    CHECK(std::equal(got.begin(), got.end(), ref.begin()));
    auto idx = sequence_by_index(b, 3000);
    for (std::size_t n = 1; n <= 3000; ++n) CHECK(idx[n] == ref[n - 1]);
  }
  CHECK(kind_of([] { sequence_by_index(300, 10); }) == ErrorKind::invalid_parameters);
  CHECK(kind_of([] { sequence(1, 10); }) == ErrorKind::invalid_base);
}

TEST_CASE("scan examples") {
  auto r = scan_nonperiodicity(10, 1, 1, 1000);
  REQUIRE(r.counterexamples.size() == 1);
  CHECK(r.counterexamples[0].n == 1);
  CHECK(r.counterexamples[0].value_n == 1);
  CHECK(r.counterexamples[0].value_shifted == 2);
  CHECK(r.exhausted.empty());
  CHECK(kind_of([] { scan_nonperiodicity(2, 3, 3, 100); }) == ErrorKind::invalid_base);
  CHECK(kind_of([] { scan_nonperiodicity(10, 0, 3, 100); }) == ErrorKind::invalid_parameters);
}

TEST_CASE("scan agrees with a brute-force oracle") {
  for (unsigned b : {3u, 5u, 10u, 12u}) {
    auto x = oracle::lnzd_factorial_prefix(4000, b);
    auto r = scan_nonperiodicity(b, 8, 60, 4000);
    std::size_t idx = 0;
    for (std::uint64_t lambda = 1; lambda <= 8; ++lambda) {
      for (std::uint64_t n0 = 1; n0 <= 60; ++n0) {
        auto expect = first_break(x, lambda, n0);
        REQUIRE(expect);
        REQUIRE(idx < r.counterexamples.size());
        const auto& c = r.counterexamples[idx++];
        CHECK(c.lambda == lambda);
        CHECK(c.preperiod == n0);
        CHECK(c.n == *expect);
        CHECK(c.value_n == x[c.n - 1]);
        CHECK(c.value_shifted == x[c.n + lambda - 1]);
      }
    }
    CHECK(idx == r.counterexamples.size());
  }
}

TEST_CASE("scan results do not depend on the worker count") {
  auto one = scan_nonperiodicity(6, 20, 200, 50000, 1);
  auto four = scan_nonperiodicity(6, 20, 200, 50000, 4);
  CHECK(one.to_json(true) == four.to_json(true));
  CHECK(one.max_counterexample_index() == four.max_counterexample_index());
}

TEST_CASE("tiny caps leave exhausted cells") {
  auto r = scan_nonperiodicity(10, 3, 20, 12);
  CHECK_FALSE(r.exhausted.empty());
  CHECK(r.counterexamples.size() + r.exhausted.size() == 60);
  for (const auto& c : r.counterexamples) CHECK(c.n + c.lambda <= 12);
}

TEST_CASE("counterexample json and verification") {
  auto r = scan_nonperiodicity(7, 4, 4, 10000);
  for (const auto& c : r.counterexamples) {
    auto back = PeriodicityCounterexample::from_json(c.to_json());
    CHECK(back.to_json() == c.to_json());
    CHECK(back.verify());
    back.value_n = (back.value_n + 1) % 7;
    CHECK_FALSE(back.verify());
  }
  CHECK(kind_of([] { PeriodicityCounterexample::from_json(nlohmann::json{{"kind", "other"}}); }) == ErrorKind::parse);
}

TEST_CASE("Gelfond tables match a direct count") {
  for (auto [b, k, m, x] : {std::array<std::uint64_t, 4>{2, 3, 5, 100000}, {5, 2, 3, 77777}, {10, 7, 4, 123456},
                            {3, 4, 7, 50000}, {7, 5, 6, 1}, {16, 3, 2, 65536}}) {
    auto ref = gelfond_oracle(b, k, m, x);
    CHECK(gelfond_table(b, k, m, x) == ref);
    CHECK(gelfond_table_bruteforce(b, k, m, x) == ref);
  }
}

TEST_CASE("Gelfond statistic") {
  auto s = gelfond_statistic(2, 3, 5, 1, 2, 1000000);
  CHECK(s.expected == Rational(200000, 3));
  CHECK(s.deviation < 1e-3);
  CHECK(kind_of([] { gelfond_statistic(5, 2, 3, 0, 0, 1000); }) == ErrorKind::invalid_parameters);
  CHECK(kind_of([] { gelfond_statistic(10, 1, 3, 0, 0, 1000); }) == ErrorKind::invalid_parameters);
  CHECK(kind_of([] { gelfond_statistic(10, 3, 3, 0, 0, 0); }) == ErrorKind::invalid_parameters);
}

TEST_CASE("find_u examples and exhaustive search") {
  CHECK(find_u(3, 1.0, 2, 1, 1) == Natural(1));
  CHECK(find_u(5, 1.0, 2, 1, 2) == Natural(1));
  for (std::uint64_t q : {2u, 3u, 5u}) {
    for (std::uint64_t k : {1u, 2u, 3u}) {
      for (unsigned long m : {1ul, 2ul, 5ul, 6ul}) {
        const std::uint64_t mu = 6;
        std::uint64_t bound = 1;
        for (int t = 0; t < 6; ++t) bound *= q;
        std::vector<std::uint64_t> admissible;
        for (std::uint64_t u = 1; u <= bound; ++u)
          if ((u + 1) % m == 0 && (oracle::digit_sum(u, q) + 1) % k == 0) admissible.push_back(u);
        for (std::uint64_t skip = 0; skip < 4; ++skip) {
          auto got = find_u(q, 1.0, mu, k, Natural(m), skip);
          if (skip < admissible.size()) {
            REQUIRE(got);
            CHECK(*got == Natural(admissible[skip]));
          } else {
            CHECK_FALSE(got);
          }
        }
      }
    }
  }
  CHECK(kind_of([] { find_u(3, 0.0, 2, 1, 1); }) == ErrorKind::invalid_parameters);
}

TEST_CASE("witness facts agree with direct computation") {
  for (unsigned b : {4u, 6u, 10u, 12u, 45u}) {
    for (unsigned i : {0u, 1u}) {
      auto w = build_witness(b, i, 1);
      CHECK(w.all_facts_hold());
      CHECK(w.refutes_period);
      CHECK(w.A == w.n0 + w.lambda);
      CHECK(w.lambda == Natural(i == 0 ? 1 : b));
      CHECK(w.mu % w.mu0 == 0);
      CHECK((w.u + 1) % w.m == 0);
      // n0 + 1 = q^mu (1 + u)
      Natural qmu;
      mpz_ui_pow_ui(qmu.get_mpz_t(), w.q, w.mu);
      CHECK(w.n0 + 1 == qmu * (w.u + 1));
      CHECK(oracle::valuation(w.A + 1, b) == i);
      CHECK(oracle::valuation(w.B + 1, b) == i);
      if (w.B < 40000) {
        auto x = oracle::lnzd_factorial_prefix(w.B.get_ui() + 1, b);
        auto at = [&](const Natural& n) { return x[n.get_ui() - 1]; };
        CHECK(at(w.A + 1) != at(w.B + 1));
        CHECK(oracle::valuation(oracle::factorial(w.n0.get_ui()), w.q) % w.a == 0);
        CHECK(oracle::valuation(oracle::factorial(w.n0.get_ui()), b) ==
              digits::LnzdEngine(b).factorial_valuation(w.n0));
      } else {
        digits::LnzdEngine e(b);
        CHECK(e.lnzd_factorial(w.A + 1) != e.lnzd_factorial(w.B + 1));
      }
      CHECK(verify_witness_json(w.to_json()).ok);
    }
  }
}

TEST_CASE("witness evaluation reports failing facts") {
  // b = 3, i = 1: the unit part of the product collapses to 1 mod 3 and fact six fails.
  auto w = evaluate_witness(3, 1, 1, 2, 2);
  CHECK(w.facts.size() == 6);
  CHECK(w.facts[2].holds == (oracle::valuation(w.A + 1, 3) == 1 && oracle::valuation(w.B + 1, 3) == 1));
  CHECK(kind_of([] { build_witness(3, 1, 1, 2, 2); }) == ErrorKind::witness_not_found);
  CHECK(kind_of([] { build_witness(10, 0, 5); }) == ErrorKind::invalid_parameters);
  CHECK(kind_of([] { build_witness(2, 0, 1); }) == ErrorKind::invalid_base);
}

TEST_CASE("tampered witnesses are rejected") {
  auto w = build_witness(10, 1, 3);
  auto j = w.to_json();
  REQUIRE(verify_witness_json(j).ok);
  auto t1 = j;
  t1["n0"] = Natural(w.n0 + 1).get_str();
  CHECK_FALSE(verify_witness_json(t1).ok);
  auto t2 = j;
  t2["checks"]["lnzd_factorials_differ"] = false;
  CHECK_FALSE(verify_witness_json(t2).ok);
  auto t3 = j;
  t3["u"] = Natural(w.u + w.m).get_str();
  CHECK_FALSE(verify_witness_json(t3).ok);
  auto t4 = j;
  t4.erase("mu");
  CHECK_FALSE(verify_witness_json(t4).ok);
}
