#include <random>

#include "doctest.h"
#include "oracles.hpp"

#include "cantrans/digits/digits.hpp"
#include "cantrans/digits/factorial.hpp"
#include "cantrans/error.hpp"
#include "cantrans/modular.hpp"

using namespace cantrans;
using namespace cantrans::digits;

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

}  // namespace

TEST_CASE("digit_sum examples") {
  CHECK(digit_sum(Natural(3628800), 10) == 27);
  CHECK(digit_sum(Natural(100), 5) == 4);
  CHECK(digit_sum(Natural(0), 7) == 0);
  CHECK(digit_sum(std::uint64_t{255}, 2) == 8);
  CHECK(kind_of([] { digit_sum(Natural(5), 1); }) == ErrorKind::invalid_base);
}

TEST_CASE("valuation, unit_part and lnzd examples") {
  CHECK(valuation(Natural(40), 2) == 3);
  CHECK(valuation(Natural(40), 10) == 1);
  CHECK(valuation(Natural(7), 10) == 0);
  CHECK(unit_part(Natural(3628800), 10) == 36288);
  CHECK(unit_part(Natural(8), 2) == 1);
  CHECK(unit_part(Natural(15), 10) == 15);
  CHECK(lnzd(Natural(3628800), 10) == 8);
  CHECK(lnzd(Natural(5040), 10) == 4);
  CHECK(lnzd(Natural(1000000), 10) == 1);
  CHECK(kind_of([] { valuation(Natural(0), 10); }) == ErrorKind::undefined_valuation);
  CHECK(kind_of([] { lnzd(Natural(0), 10); }) == ErrorKind::undefined_valuation);
}

TEST_CASE("n = b^v * unit_part with b not dividing the unit part") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 500; ++t) {
    const std::uint64_t b = 2 + rng() % 40;
    Natural n = Natural(1 + rng() % 100000) * Natural(b) * Natural(1 + rng() % 50);
    Natural v = valuation(n, b), u = unit_part(n, b);
    Natural bv;
    mpz_pow_ui(bv.get_mpz_t(), Natural(b).get_mpz_t(), v.get_ui());
    CHECK(bv * u == n);
    CHECK(mpz_divisible_ui_p(u.get_mpz_t(), b) == 0);
    CHECK(v == oracle::valuation(n, b));
  }
}

TEST_CASE("Legendre formula examples and dual form") {
  CHECK(legendre_valuation_factorial(Natural(10), 2) == 8);
  CHECK(legendre_valuation_factorial(Natural(100), 5) == 24);
  CHECK(legendre_valuation_factorial(Natural(0), 3) == 0);
  CHECK(kind_of([] { legendre_valuation_factorial(Natural(10), 4); }) == ErrorKind::invalid_prime);
  for (std::uint64_t p : {2, 3, 5, 7, 11, 97}) {
    for (std::uint64_t n = 0; n <= 1000000; n += 997) {
      std::uint64_t floor_sum = 0;
      for (std::uint64_t pk = p; pk <= n; pk *= p) floor_sum += n / pk;
      CHECK(legendre_valuation_factorial(Natural(n), p) == floor_sum);
      CHECK((n - oracle::digit_sum(n, p)) / (p - 1) == floor_sum);
    }
  }
}

TEST_CASE("digit sum bound s_p(n) <= (p-1)(floor(log_p n) + 1)") {
  for (std::uint64_t p : {2, 3, 7, 10}) {
    for (std::uint64_t n = 1; n < 200000; n += 13) {
      std::uint64_t len = 0;
      for (std::uint64_t m = n; m > 0; m /= p) ++len;
      CHECK(digit_sum(n, p) <= (p - 1) * len);
    }
  }
}

TEST_CASE("lnzd is multiplicative when the product of digits is a unit") {
  std::mt19937_64 rng(5);
  int checked = 0;
  for (int t = 0; t < 2000; ++t) {
    const std::uint64_t b = 3 + rng() % 30;
    Natural M = Natural(1 + rng() % 1000000), N = Natural(1 + rng() % 1000000);
    const std::uint64_t lm = lnzd(M, b), ln = lnzd(N, b);
    if ((lm * ln) % b == 0) continue;
    CHECK(lnzd(M * N, b) == (lm * ln) % b);
    ++checked;
  }
  CHECK(checked > 500);
}

TEST_CASE("valuation is conserved below q^A and digit sums do not carry") {
  std::mt19937_64 rng(9);
  for (int t = 0; t < 1000; ++t) {
    const std::uint64_t q = 2 + rng() % 9;
    const unsigned A = 1 + rng() % 6;
    std::uint64_t qA = 1;
    for (unsigned i = 0; i < A; ++i) qA *= q;
    const std::uint64_t x = 1 + rng() % (qA * 50);
    if (oracle::valuation(Natural(x), q) >= A) continue;
    const std::uint64_t u = rng() % 1000;
    CHECK(oracle::valuation(Natural(x + qA * u), q) == oracle::valuation(Natural(x), q));
    const std::uint64_t small = x % qA, m = rng() % 100000;
    CHECK(digit_sum(small + qA * m, q) == digit_sum(small, q) + digit_sum(m, q));
  }
}

TEST_CASE("base factorization ordering") {
  auto f10 = BaseFactorization::of(10);
  CHECK(f10.leading().p == 5);
  CHECK(f10.factors()[1].p == 2);
  auto f12 = BaseFactorization::of(12);  // theta tie 2 = 2, a log p: log 3 < 2 log 2
  CHECK(f12.leading().p == 3);
  CHECK(f12.factors()[1].a == 2);
  auto f4 = BaseFactorization::of(4);
  CHECK(f4.is_prime_power());
  CHECK(f4.leading().a == 2);
  auto f45 = BaseFactorization::of(45);
  CHECK(f45.leading().p == 5);  // theta 4 (5) vs 4 (3^2): log 5 < 2 log 3
  std::uint64_t prod = 1;
  for (const auto& f : BaseFactorization::of(2 * 2 * 3 * 7 * 7 * 11).factors()) prod *= f.modulus;
  CHECK(prod == 2 * 2 * 3 * 7 * 7 * 11);
}

TEST_CASE("Wilson tables: sign rule and partial products") {
  for (auto [p, a] : std::vector<std::pair<std::uint64_t, unsigned>>{{2, 1}, {2, 2}, {2, 3}, {2, 5}, {3, 2}, {5, 1}, {7, 2}}) {
    WilsonTable t(p, a);
    const std::uint64_t M = t.modulus();
    std::uint64_t prod = 1;
    for (std::uint64_t j = 1; j <= M; ++j) {
      if (j % p != 0) prod = prod * j % M;
      CHECK(t.partial(j) == prod);
    }
    const int expected = (p == 2 && a >= 3) ? 1 : -1;
    CHECK(t.epsilon() == expected);
    CHECK(prod == (expected == 1 ? 1 : M - 1));
  }
}

TEST_CASE("factorial_unit_mod against the exact factorial") {
  CHECK(factorial_unit_mod(Natural(10), WilsonTable(2, 1)) == 1);
  CHECK(factorial_unit_mod(Natural(10), WilsonTable(5, 1)) == 2);
  for (auto [p, a] : std::vector<std::pair<std::uint64_t, unsigned>>{{2, 1}, {2, 2}, {2, 3}, {3, 1}, {3, 2}, {5, 1}, {5, 2}, {7, 1}}) {
    WilsonTable t(p, a);
    mpz_class f = 1;
    for (unsigned long n = 1; n <= 5000; ++n) {
      f *= n;
      while (mpz_divisible_ui_p(f.get_mpz_t(), p)) mpz_divexact_ui(f.get_mpz_t(), f.get_mpz_t(), p);
      REQUIRE(factorial_unit_mod(Natural(n), t) == mpz_fdiv_ui(f.get_mpz_t(), t.modulus()));
    }
  }
  CHECK(kind_of([] { factorial_unit_mod(Natural(10), 3, 1, WilsonTable(5, 1)); }) == ErrorKind::configuration);
}

TEST_CASE("lnzd_factorial small values") {
  const std::vector<std::uint64_t> expect{1, 2, 6, 4, 2, 2, 4, 2, 8, 8};
  LnzdEngine e10(10);
  for (std::uint64_t n = 1; n <= 10; ++n) CHECK(e10.lnzd_factorial(Natural(n)) == expect[n - 1]);
  LnzdEngine e2(2);
  for (std::uint64_t n : {1, 2, 17, 1000, 123456789}) CHECK(e2.lnzd_factorial(Natural(n)) == 1);
}

TEST_CASE("lnzd_factorial equals the exact factorial for n <= 5000") {
  std::vector<std::uint64_t> bases{36, 45, 100, 210};
  for (std::uint64_t b = 2; b <= 16; ++b) bases.push_back(b);
  for (std::uint64_t b : bases) {
    auto expect = oracle::lnzd_factorial_prefix(5000, b);
    LnzdEngine engine(b);
    FactorialUnitStepper stepper(b);
    for (std::uint64_t n = 1; n <= 5000; ++n) {
      REQUIRE(engine.lnzd_factorial(Natural(n)) == expect[n - 1]);
      REQUIRE(stepper.next() == expect[n - 1]);
    }
  }
}

TEST_CASE("library oracle agrees with the independent oracle and enforces its guard") {
  for (std::uint64_t b : {3, 10, 12}) {
    auto lib = oracle_lnzd_factorial_prefix(300, b);
    auto ref = oracle::lnzd_factorial_prefix(300, b);
    for (std::size_t i = 0; i < ref.size(); ++i) CHECK(lib[i] == ref[i]);
    CHECK(oracle_lnzd_factorial(777, b) == oracle::lnzd_factorial(777, b));
  }
  CHECK(kind_of([] { oracle_lnzd_factorial(oracle_guard + 1, 10); }) == ErrorKind::oracle_scale);
}

TEST_CASE("CRT assembly when a non-minimizing prime has a zero local residue") {
  // b = 10: for n >= 2 the power of 2 exceeds the power of 5, so U_10(n!) is even.
  LnzdEngine e(10);
  for (std::uint64_t n = 2; n <= 200; ++n) {
    auto r = e.local_residues(Natural(n));
    const auto& fs = e.factorization().factors();
    for (std::size_t j = 0; j < fs.size(); ++j) {
      if (fs[j].p == 2) CHECK(r[j] == 0);
    }
    CHECK(e.lnzd_factorial(Natural(n)) % 2 == 0);
  }
}

TEST_CASE("large n is consistent under the multiplicative recursion") {
  // (n+1)! = n! (n+1): lnzd((n+1)!) = lnzd(n!) * lnzd(n+1) mod b when that is a unit.
  LnzdEngine e(10);
  Natural n;
  mpz_ui_pow_ui(n.get_mpz_t(), 10, 50);
  n += 7;
  for (int t = 0; t < 20; ++t, n += 1) {
    const std::uint64_t a = e.lnzd_factorial(n), c = e.lnzd_factorial(n + 1), d = lnzd(n + 1, 10);
    if ((a * d) % 10 != 0 && (a * d) % 5 != 0 && d % 2 == 1) CHECK(c == (a * d) % 10);
    CHECK(c >= 1);
    CHECK(c <= 9);
  }
  // The CRT result reduces to each local residue.
  auto r = e.local_residues(n);
  const auto& fs = e.factorization().factors();
  for (std::size_t j = 0; j < fs.size(); ++j) CHECK(e.lnzd_factorial(n) % fs[j].modulus == r[j]);
}

TEST_CASE("modular helpers") {
  CHECK(modular::multiplicative_order(2, 1) == 1);
  CHECK(modular::multiplicative_order(3, 4) == 2);
  CHECK(modular::multiplicative_order(2, 7) == 3);
  CHECK(modular::lcm(4, 6) == 12);
  CHECK(modular::valuation(48, 2) == 4);
  for (std::uint64_t n = 0; n < 5000; ++n) CHECK(modular::is_prime(n) == oracle::is_prime(n));
  CHECK(modular::is_prime(18446744073709551557ULL));
  std::uint64_t prod = 1;
  for (auto [p, e] : modular::factorize(3ULL * 3 * 5 * 1000003ULL)) {
    for (unsigned i = 0; i < e; ++i) prod *= p;
  }
  CHECK(prod == 3ULL * 3 * 5 * 1000003ULL);
  CHECK(modular::inverse(3, 7).value() == 5);
  CHECK_FALSE(modular::inverse(2, 4).has_value());
}
