#include "doctest.h"

#include "deformq/coeffring.hpp"
#include "deformq/random.hpp"

using namespace dq;

namespace {

PolyRep x(int dim, int i) { return PolyRep::coordinate(dim, i); }

std::vector<Rational> pt(std::initializer_list<long> v) {
  std::vector<Rational> out;
  for (long a : v) out.emplace_back(a);
  return out;
}

}  // namespace

TEST_CASE("monomial and mode products") {
  PolyRep p = x(2, 0) * x(2, 1);
  CHECK(p.terms().size() == 1);
  CHECK(p.terms().begin()->first == Exponent{1, 1});
  CHECK(p.terms().begin()->second == 1);

  TrigRep a = TrigRep::mode({1, 0}, ComplexRational(2, 1));
  TrigRep b = TrigRep::mode({2, 0}, ComplexRational(3));
  TrigRep c = a * b;
  CHECK(c.modes().size() == 1);
  CHECK(c.modes().begin()->first == Exponent{3, 0});
  CHECK(c.modes().begin()->second == ComplexRational(6, 3));

  PolyRep lhs = (x(2, 0) + x(2, 1)) * (x(2, 0) - x(2, 1));
  PolyRep rhs = x(2, 0) * x(2, 0) - x(2, 1) * x(2, 1);
  CHECK(lhs == rhs);
}

TEST_CASE("partial derivatives") {
  CHECK(partial_derivative(x(2, 0) * x(2, 1), 0) == SmoothRep(x(2, 1)));
  SmoothRep m = TrigRep::mode({3, 0}, ComplexRational(1));
  CHECK(partial_derivative(m, 0) == SmoothRep(TrigRep::mode({3, 0}, ComplexRational(0, 3))));
  CHECK_THROWS_AS(partial_derivative(m, 2), ValidationError);

  RandomSource rng(11);
  for (int t = 0; t < 20; ++t) {
    SmoothRep f = rng.poly(3, 5, 6);
    SmoothRep g = rng.trig(3, 3, 4);
    CHECK(f.derivative(0).derivative(1) == f.derivative(1).derivative(0));
    CHECK(g.derivative(2).derivative(1) == g.derivative(1).derivative(2));
    SmoothRep h = rng.poly(3, 4, 5);
    CHECK((f * h).derivative(2) == f.derivative(2) * h + f * h.derivative(2));
    SmoothRep k = rng.trig(3, 2, 3);
    CHECK((g * k).derivative(0) == g.derivative(0) * k + g * k.derivative(0));
  }
}

TEST_CASE("mixed products and sums") {
  SmoothRep s = SmoothRep::sum(x(2, 0), TrigRep::sine({1, 0}));
  CHECK(s.is_sum());
  CHECK(s - SmoothRep(TrigRep::sine({1, 0})) == SmoothRep(x(2, 0)));
  CHECK((s - SmoothRep(x(2, 0))).is_trig());
  SmoothRep two = SmoothRep::constant(2, 2);
  CHECK(two * s == s + s);
  CHECK_THROWS_AS(SmoothRep(x(2, 0)) * SmoothRep(TrigRep::sine({1, 0})), UnrepresentableProduct);
  CHECK_THROWS_AS(SmoothRep(x(2, 0)) + SmoothRep(x(3, 0)), DimensionMismatch);
  // constants are shared between the parts
  SmoothRep c1 = SmoothRep::sum(PolyRep::constant(2, 3), TrigRep::mode({1, 1}, ComplexRational(1)));
  CHECK(c1.is_trig());
  CHECK(c1.trig().zero_mode() == ComplexRational(3));
}

TEST_CASE("evaluation") {
  auto v = evaluate(x(2, 0) * x(2, 1), pt({2, 3}));
  CHECK(v.exact());
  CHECK(v.re.lo == 6);
  auto c = evaluate(TrigRep::constant(2, ComplexRational(5)), pt({7, 1}));
  CHECK(c.exact());
  CHECK(c.re.lo == 5);
  auto e = evaluate(TrigRep::mode({1, 0}, ComplexRational(1)), pt({0, 0}));
  CHECK(e.re.contains(1));
  CHECK(e.im.contains(0));

  // sin(1) = 0.8414709848078965...
  auto s = evaluate(TrigRep::sine({1, 0}), pt({1, 0}), make_rational(1, 1000000000));
  CHECK(s.re.overlaps({parse_rational("84147098480789650/100000000000000000"),
                       parse_rational("84147098480789651/100000000000000000")}));
  CHECK(s.re.width() <= make_rational(1, 1000000000));
  CHECK(s.im.contains(0));
}

TEST_CASE("jets") {
  auto j = jet(x(2, 0) * x(2, 1), pt({0, 0}), 2);
  CHECK(j.size() == 6);
  for (const auto& [idx, val] : j) {
    if (idx == Exponent{1, 1}) {
      CHECK(val.re.lo == 1);
    } else {
      CHECK(val.re == Enclosure::point(0));
    }
  }
  auto j0 = jet(x(2, 0) + PolyRep::constant(2, 4), pt({2, 5}), 0);
  CHECK(j0.size() == 1);
  CHECK(j0.at(Exponent{0, 0}).re.lo == 6);
  auto jc = jet(SmoothRep::constant(2, 9), pt({1, 1}), 3);
  for (const auto& [idx, val] : jc) CHECK(val.re.lo == (total_degree(idx) == 0 ? 9 : 0));
}

TEST_CASE("certified suprema") {
  const Rational tol = make_rational(1, 1000);
  Box sq = Box::cube(2, -1, 1);
  Enclosure e = sup_enclosure(x(2, 0), sq, tol);
  CHECK(e.contains(1));
  CHECK(e.width() <= tol);
  CHECK(sup_enclosure(SmoothRep(2), sq, tol) == Enclosure::point(0));
  CHECK(sup_enclosure(SmoothRep::constant(2, 7), sq, tol) == Enclosure::point(7));

  // interior maximum: 1 - x^2 - y^2 on [-1,1]^2 has sup 1 at the origin (also |.|=1 at corners)
  PolyRep bowl = PolyRep::constant(2, 1) - x(2, 0) * x(2, 0) - x(2, 1) * x(2, 1);
  Enclosure b = sup_enclosure(bowl, Box::cube(2, make_rational(-1, 2), make_rational(1, 2)), tol);
  CHECK(b.contains(1));

  Enclosure s = sup_enclosure(TrigRep::sine({1, 0}), Box::cube(2, 0, 1), tol);
  CHECK(s.overlaps({parse_rational("84147098480/100000000000"), parse_rational("84147098481/100000000000")}));

  SupBudget tiny;
  tiny.max_evaluations = 10;
  CHECK_THROWS_AS(sup_enclosure(bowl, sq, tol, tiny), BudgetExceeded);
}

TEST_CASE("suprema dominate samples and are subadditive") {
  RandomSource rng(5);
  const Rational tol = make_rational(1, 100);
  Box box = Box::cube(2, -1, 2);
  for (int t = 0; t < 10; ++t) {
    SmoothRep f = rng.poly(2, 3, 4);
    SmoothRep g = rng.trig(2, 2, 3);
    Enclosure ef = sup_enclosure(f, box, tol);
    Enclosure eg = sup_enclosure(g, box, tol);
    for (int s = 0; s < 10; ++s) {
      std::vector<Rational> p{Rational(rng.integer(-100, 200), 100), Rational(rng.integer(-100, 200), 100)};
      CHECK(abs(evaluate(f, p).re.hi) <= ef.hi);
    }
    SmoothRep h = f + g;
    Enclosure eh = sup_enclosure(h, box, tol);
    CHECK(eh.lo <= ef.hi + eg.hi);
    CHECK(eh.hi <= ef.hi + eg.hi + tol);
  }
}

TEST_CASE("suprema of single-direction trig functions") {
  const Rational tol = make_rational(1, 100000);
  // cos(2x - y) peaks along whole lines; the sup is 2/3 for either sign.
  TrigRep ridge = TrigRep::cosine({2, -1}) * ComplexRational(make_rational(-2, 3));
  Enclosure e = sup_enclosure(ridge, Box::cube(2, 0, 7), tol);
  CHECK(e.contains(make_rational(2, 3)));
  CHECK(e.width() <= tol);
  // <(1, 1), x> ranges over [0, 1/2] on the box, where sin stays below sin(1/2).
  Enclosure s = sup_enclosure(TrigRep::sine({1, 1}), Box::cube(2, 0, make_rational(1, 4)), tol);
  CHECK(s.overlaps({parse_rational("479425/1000000"), parse_rational("479426/1000000")}));
  TrigRep two = TrigRep::sine({2, 2}) + TrigRep::cosine({1, 1});
  Enclosure t = sup_enclosure(two, Box::cube(2, -1, 1), tol);
  RandomSource rng(2);
  for (int i = 0; i < 50; ++i) {
    std::vector<Rational> p{Rational(rng.integer(-100, 100), 100), Rational(rng.integer(-100, 100), 100)};
    CHECK(abs(evaluate(SmoothRep(two), p).re.lo) <= t.hi);
  }
}

TEST_CASE("suprema of trig functions over several periods") {
  const Rational tol = make_rational(1, 10000);
  RandomSource rng(12);
  for (int t = 0; t < 5; ++t) {
    const SmoothRep f = rng.trig(2, 3, 4);
    const Enclosure wide = sup_enclosure(f, Box::cube(2, -20, 20), tol);
    const Enclosure one = sup_enclosure(f, Box::cube(2, make_rational(-7, 2), 7), tol);
    CHECK(wide.overlaps(one));
    CHECK(wide.width() <= tol);
  }
}

TEST_CASE("interval sin_cos and ulp steps") {
  for (double v : {-3.5, -1e-300, 0.0, 2.0, 1e308}) {
    CHECK(Interval::up(v) > v);
    CHECK(Interval::down(v) < v);
    CHECK(Interval::up(v) == std::nextafter(v, INFINITY));
    CHECK(Interval::down(v) == std::nextafter(v, -INFINITY));
  }
  CHECK(Interval::up(INFINITY) == INFINITY);
  const Interval t(0.3, 0.5);
  const auto [s, c] = sin_cos(t);
  CHECK(s.contains(std::sin(0.4)));
  CHECK(c.contains(std::cos(0.3)));
  CHECK(c.contains(std::cos(0.5)));
}
