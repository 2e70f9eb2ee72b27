#include <random>

#include "doctest.h"

#include "cantrans/cantor/cantor.hpp"
#include "cantrans/error.hpp"

using namespace cantrans;
using namespace cantrans::cantor;

namespace {

// Greedy digits of a rational x in a rational periodic base, plain mpq.
std::vector<Digit> greedy_oracle(Rational x, const std::vector<Rational>& beta, std::size_t n) {
  std::vector<Digit> out;
  for (std::size_t k = 0; k < n; ++k) {
    Rational y = beta[k % beta.size()] * x;
    Natural d = y.get_num() / y.get_den();
    out.push_back(d.get_ui());
    x = y - Rational(d);
  }
  return out;
}

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::internal_consistency;
}

CantorBase golden_base() {
  auto phi = algebraic::make_algebraic({Natural(-1), Natural(-1), Natural(1)}, algebraic::RealBox{1, 2});
  auto K = algebraic::NumberField::make(phi);
  return CantorBase::exact({K->gen()});
}

}  // namespace

TEST_CASE("greedy steps") {
  auto base = CantorBase::rational({10});
  auto s = greedy_step(lift(base, Rational(1, 3)), base.entry(0));
  CHECK(s.digit == 3);
  CHECK(s.next.as_rational() == Rational(1, 3));
  CHECK(kind_of([&] { greedy_step(lift(base, Rational(1)), base.entry(0)); }) == ErrorKind::invalid_parameters);
  auto ns = greedy_step(numeric::Interval::enclose(Rational(1, 4), 64), numeric::Interval::point(3L, 64));
  CHECK(ns.digit == 0);
  CHECK(kind_of([] { greedy_step(numeric::Interval::enclose(Rational(1, 3), 64), numeric::Interval::point(3L, 64)); }) ==
        ErrorKind::boundary_undecidable);
}

TEST_CASE("expansion examples") {
  auto b10 = CantorBase::rational({10});
  CHECK(expand(Rational(1, 3), b10, 5).digits == std::vector<Digit>{3, 3, 3, 3, 3});
  auto b23 = CantorBase::rational({2, 3});
  CHECK(b23.delta().as_rational() == Rational(6));
  CHECK(b23.alphabet_bound() == 2);
  CHECK(expand(Rational(1, 2), b23, 4).digits == std::vector<Digit>{1, 0, 0, 0});
  CHECK(expand(Rational(1, 5), b23, 6).digits == std::vector<Digit>{0, 1, 0, 1, 0, 1});
  CHECK(kind_of([&] { expand(Rational(-1, 5), b23, 3); }) == ErrorKind::invalid_parameters);
  CHECK(kind_of([] { CantorBase::rational({2, Rational(1, 2)}); }) == ErrorKind::invalid_parameters);
}

TEST_CASE("expansion matches a plain rational oracle") {
  std::mt19937_64 rng(7);
  std::vector<std::vector<Rational>> bases = {{10}, {2, 3}, {Rational(5, 2)}, {3, Rational(7, 3), 2}, {12}};
  for (const auto& bv : bases) {
    auto base = CantorBase::rational(bv);
    for (int t = 0; t < 40; ++t) {
      unsigned long q = 1 + rng() % 97;
      Rational x(static_cast<long>(rng() % q), q);
      x.canonicalize();
      CHECK(expand(x, base, 40).digits == greedy_oracle(x, bv, 40));
    }
  }
}

TEST_CASE("remainder identity and val round trip") {
  auto base = golden_base();
  const auto& K = base.field();
  auto x = K->element({Rational(-1, 3), Rational(1, 2)});  // (phi - 2/3) / 2 ~ 0.476
  REQUIRE(x.sign() == 1);
  auto e = expand(x, base, 30);
  REQUIRE(e.remainder);
  // x = val(a_1..a_n) + tau^n(x) * phi^-n
  CHECK(val_exact(e.digits, base) + *e.remainder * K->gen().pow(-30) == x);
  auto ve = val(e.digits, base, 128, base.alphabet_bound());
  CHECK(ve.value.contains(x.value(160).re));
  CHECK(ve.partial.overlaps(val_exact(e.digits, base).value(160).re));
  CHECK_FALSE(ve.heuristic);
  // numeric path on the same base agrees
  CHECK(expand_numeric(x.value(256).re, base, 30, 256).digits == e.digits);

  std::vector<Digit> zeros(12, 0);
  CHECK(val_exact(zeros, base).is_zero());
  CHECK(val(zeros, base, 64, 0).value.contains(Rational(0)));

  GreedyExpander g(base, x);
  for (std::size_t k = 0; k < 30; ++k) CHECK(g.next() == e.digits[k]);
  CHECK(g.state() == *e.remainder);
}

TEST_CASE("tail bounds") {
  auto base = CantorBase::rational({2, 3});
  // C = 6 (4 - 1) / (4 * 5 * 1) = 9/10
  CHECK(base.tail_constant().as_rational() == Rational(9, 10));
  auto n = terms_for_tail(base, 2, 64);
  CHECK(tail_bound(base, n, 2).compare(Rational(1, Natural(1) << 64)) < 0);
  CHECK(tail_bound(base, n - 1, 2).compare(Rational(1, Natural(1) << 64)) >= 0);
  CHECK(tail_bound_enclosure(base, 5, 2, 64).contains(tail_bound(base, 5, 2).as_rational().value()));
}

TEST_CASE("periodicity and certificates") {
  auto b23 = CantorBase::rational({2, 3});
  auto c = detect_periodicity(lift(b23, Rational(1, 5)), b23, 100);
  REQUIRE(c);
  CHECK(c->preperiod == 0);
  CHECK(c->period == 2);
  CHECK(verify_certificate(*c, lift(b23, Rational(1, 5)), b23).ok);
  auto z = detect_periodicity(lift(b23, Rational(0)), b23, 100);
  REQUIRE(z);
  CHECK(z->period == 1);

  auto js = c->to_json(b23, lift(b23, Rational(1, 5)));
  CHECK(verify_certificate_json(js).ok);
  auto bad = js;
  bad["digits"][1] = 2;
  CHECK_FALSE(verify_certificate_json(bad).ok);

  // random rationals: digits agree with the cycle far beyond the certificate
  std::mt19937_64 rng(3);
  auto b = CantorBase::rational({3, Rational(4, 3)});
  for (int t = 0; t < 30; ++t) {
    unsigned long q = 2 + rng() % 40;
    Rational x(static_cast<long>(rng() % q), q);
    x.canonicalize();
    auto cert = detect_periodicity(lift(b, x), b, 10000);
    REQUIRE(cert);
    auto d = expand(x, b, 200).digits;
    for (std::size_t k = 1; k <= 200; ++k) CHECK(cert->digit(k) == d[k - 1]);
    if (cert->period > 0) {
      for (std::size_t k = cert->preperiod + 1; k + cert->period <= 200; ++k) CHECK(d[k - 1] == d[k - 1 + cert->period]);
    }
  }
  // field points in a Pisot base cycle as well
  auto g = golden_base();
  auto y = (g.field()->gen() - Rational(1)) * Rational(1, 3);
  auto gc = detect_periodicity(y, g, 10000);
  REQUIRE(gc);
  CHECK(gc->period >= 1);
  CHECK(verify_certificate(*gc, y, g).ok);
  CHECK(verify_certificate_json(gc->to_json(g, y)).ok);
}

TEST_CASE("admissibility thresholds") {
  auto t12 = admissibility_bound(CantorBase::rational({12}));
  CHECK(t12.exact->as_rational() == Rational(11));
  CHECK(t12.digit_bound == 11);
  auto t23 = admissibility_bound(CantorBase::rational({2, 3}));
  CHECK(t23.exact->as_rational() == Rational(10, 9));
  CHECK(t23.digit_bound == 1);
  CHECK(t23.enclosure.contains(Rational(10, 9)));
  CHECK(admissibility_bound(CantorBase::rational({4})).exact->as_rational() == Rational(3));

  auto b23 = CantorBase::rational({2, 3});
  std::vector<Digit> ok = {0, 1, 1, 0, 1};
  std::vector<Digit> high = {0, 2, 1};
  std::vector<Digit> flat = {1, 1, 1, 1};
  CHECK(certify_admissible(ok, b23).certified);
  CHECK_FALSE(certify_admissible(high, b23).certified);
  CHECK_FALSE(certify_admissible(flat, b23).certified);
}

TEST_CASE("shift value checks") {
  auto b32 = CantorBase::rational({Rational(3, 2)});
  std::vector<Digit> ones(80, 1);
  auto r = shift_value_check(ones, b32, 10, Digit{1});
  CHECK_FALSE(r.ok);
  REQUIRE(r.violation);
  CHECK(*r.violation == 0);

  auto b23 = CantorBase::rational({2, 3});
  std::vector<Digit> zeros(40, 0);
  CHECK(shift_value_check(zeros, b23, 20, Digit{0}).ok);
  auto d = expand(Rational(1, 5), b23, 80).digits;
  CHECK(shift_value_check(d, b23, 20).ok);
}

TEST_CASE("json round trip of bases") {
  auto b = CantorBase::rational({2, 3});
  auto back = CantorBase::from_json(b.to_json());
  CHECK(back.period() == 2);
  CHECK(back.delta().as_rational() == Rational(6));
  auto g = golden_base();
  auto gb = CantorBase::from_json(g.to_json());
  CHECK(gb.is_exact());
  CHECK(gb.delta().value(64).re.overlaps(g.delta().value(64).re));
  auto nb = CantorBase::numeric({numeric::Interval::enclose(Rational(5, 2), 64)});
  CHECK(nb.heuristic());
  CHECK(expand_numeric(numeric::Interval::enclose(Rational(1, 7), 64), nb, 10, 64).heuristic);
}
