#include "doctest.h"

#include "deformq/approx.hpp"
#include "deformq/random.hpp"

#include <cmath>

using namespace dq;

namespace {

SmoothRep x(int i, int dim = 2) { return PolyRep::coordinate(dim, i); }
Rational q(long a, long b = 1) { return make_rational(a, b); }
Box unit(int dim) { return Box::cube(dim, q(0), q(1)); }

double binom(int n, int k) { return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)); }

}  // namespace

TEST_CASE("bernstein: definition and reproduction") {
  const SmoothRep f = x(0, 1) * x(0, 1);
  CHECK(SmoothRep(bernstein(f, 1, unit(1))) == x(0, 1));
  CHECK(SmoothRep(bernstein(f, 2, unit(1))) == (x(0, 1) * x(0, 1) + x(0, 1)).scaled(q(1, 2)));
  CHECK(SmoothRep(bernstein(SmoothRep::constant(2, q(-7, 3)), 5, unit(2))) == SmoothRep::constant(2, q(-7, 3)));

  const Box K({q(-1), q(1, 2)}, {q(2), q(3)});
  const SmoothRep affine = x(0).scaled(q(3, 4)) - x(1).scaled(q(2)) + SmoothRep::constant(2, q(5));
  for (int nu = 1; nu <= 6; ++nu) CHECK(SmoothRep(bernstein(affine, nu, K)) == affine);
  // Bilinear terms are reproduced by tensor Bernstein operators as well.
  CHECK(SmoothRep(bernstein(x(0) * x(1), 3, K)) == x(0) * x(1));
}

TEST_CASE("bernstein: transcendental samples") {
  const SmoothRep s(TrigRep::sine({1}));
  const int nu = 8;
  const PolyRep p = bernstein(s, nu, unit(1));
  CHECK(p.degree() <= nu);
  for (double t : {0.0, 0.3, 0.5, 0.9, 1.0}) {
    double expect = 0;
    for (int k = 0; k <= nu; ++k) {
      expect += std::sin(double(k) / nu) * binom(nu, k) * std::pow(t, k) * std::pow(1 - t, nu - k);
    }
    const Rational xt = from_double(t);
    CHECK(std::fabs(p.evaluate(std::span<const Rational>(&xt, 1)).get_d() - expect) < 1e-12);
  }
  const auto A = bernstein_samples(s, {nu}, unit(1), 96);
  CHECK_FALSE(A.exact);
  CHECK(A.scale == pow2(-96));
}

TEST_CASE("bernstein: certified derivative convergence for sin") {
  const SmoothRep s(TrigRep::sine({1}));
  bool reached = false;
  Rational previous(100);
  for (int nu = 4; nu <= 256 && !reached; nu *= 2) {
    const auto A = bernstein_samples(s, {nu}, unit(1), 160);
    const auto err = bernstein_error(s, A, 2, q(1, 1000));
    Rational worst(0);
    for (const auto& [I, e] : err) worst = std::max(worst, e.hi);
    CHECK(worst < previous);
    previous = worst;
    if (worst < q(1, 10)) reached = true;
  }
  CHECK(reached);
}

TEST_CASE("bernstein: error enclosure brackets sampled errors") {
  const SmoothRep s(TrigRep::sine({1}));
  const int nu = 16;
  const auto A = bernstein_samples(s, {nu}, unit(1), 160);
  const PolyRep p = A.to_poly();
  const auto err = bernstein_error(s, A, 2, q(1, 100000));
  for (int r = 0; r <= 2; ++r) {
    const PolyRep dp = p.derivative(Exponent{r});
    double sampled = 0;
    for (int i = 0; i <= 4000; ++i) {
      const double t = i / 4000.0;
      const Rational xt = from_double(t);
      const double fr = r == 0 ? std::sin(t) : r == 1 ? std::cos(t) : -std::sin(t);
      sampled = std::max(sampled, std::fabs(fr - dp.evaluate(std::span<const Rational>(&xt, 1)).get_d()));
    }
    const Enclosure& e = err.at(Exponent{r});
    CHECK(e.hi.get_d() >= sampled - 1e-12);
    CHECK(e.lo.get_d() <= sampled * (1 + 1e-6) + 1e-12);
    CHECK(e.width() <= q(1, 100000));
  }
}

TEST_CASE("bernstein: constant axes and polynomial slices") {
  const SmoothRep s(TrigRep::sine({1, 0}));
  const auto p = bernstein(s, 8, unit(2));
  for (const auto& [e, c] : p.terms()) CHECK(e[1] == 0);
  const auto A = bernstein_samples(s, {8, 0}, unit(2), 128);
  const auto err = bernstein_error(s, A, 1, q(1, 1000));
  CHECK(err.at(Exponent{0, 1}) == Enclosure::point(0));
  CHECK(err.at(Exponent{1, 0}).hi > 0);
}

TEST_CASE("classical_to_quantum: examples") {
  const auto S = SymplecticStructure::standard(1);
  auto q1 = classical_to_quantum(x(0).poly(), S, 3);
  REQUIRE(q1.witness.size() == 1);
  CHECK(q1.witness[0] == WitnessTerm{0, q(1), {1, 0}});
  CHECK(q1.witness[0].word() == std::vector<int>{0});
  CHECK(q1.value == constant_series(x(0), 3));

  auto q2 = classical_to_quantum((x(0) * x(1)).poly(), S, 3);
  REQUIRE(q2.witness.size() == 2);
  CHECK(q2.witness[0] == WitnessTerm{0, q(1), {1, 1}});
  // x1 * x2 = x1 x2 + (hbar/2) w^{12}, so the remainder is -(hbar/2) w^{12}.
  CHECK(q2.witness[1] == WitnessTerm{1, -S.upper(0, 1) / 2, {0, 0}});
  CHECK(q2.value == constant_series(x(0) * x(1), 3));
  CHECK(evaluate_witness(q2, S) == q2.value);

  auto q3 = classical_to_quantum(PolyRep::constant(2, q(5, 2)), S, 2);
  REQUIRE(q3.witness.size() == 1);
  CHECK(q3.witness[0] == WitnessTerm{0, q(5, 2), {0, 0}});
  CHECK(q3.witness[0].word().empty());
}

TEST_CASE("classical_to_quantum: witness soundness on random polynomials") {
  RandomSource rng(11);
  for (int n : {1, 2}) {
    const auto S = SymplecticStructure::standard(n);
    for (int trial = 0; trial < 20; ++trial) {
      const PolyRep p = rng.poly(2 * n, 5, 5);
      const auto qp = classical_to_quantum(p, S, 4);
      CHECK(SmoothRep(qp.value[0]) == SmoothRep(p));
      CHECK(evaluate_witness(qp, S) == qp.value);
      const FormalFunction fp = rng.formal_poly(2 * n, 3, 4, 3);
      const auto qf = classical_to_quantum(fp, S);
      CHECK(evaluate_witness(qf, S) == fp);
    }
  }
  Matrix w = {{q(0), q(-2)}, {q(2), q(0)}};
  const auto S = SymplecticStructure::from_lower(w);
  const PolyRep p = (x(0) * x(0) * x(1) * x(1)).poly();
  const auto qp = classical_to_quantum(p, S, 4);
  CHECK(evaluate_witness(qp, S) == qp.value);
}

TEST_CASE("quantum_weierstrass: polynomial inputs") {
  const auto S = SymplecticStructure::standard(1);
  const int N = 2;
  FormalFunction f(N + 1, SmoothRep(2));
  f[0] = x(0) * x(1) + SmoothRep::constant(2, q(3));
  f[2] = x(1).scaled(q(-1, 2));
  auto r = quantum_weierstrass(f, unit(2), N, S);
  CHECK(r.p.value == f);
  CHECK(r.bound.contains(0));
  CHECK(r.bound.hi == pow2(-(N + 1)));
  CHECK(evaluate_witness(r.p, S) == f);

  FormalFunction g(N + 1, SmoothRep(2));
  g[1] = x(0) * x(0);
  auto rg = quantum_weierstrass(g, unit(2), N, S);
  CHECK(rg.p.value == g);
  CHECK(rg.bound == Enclosure(q(0), pow2(-(N + 1))));
  CHECK(rg.p.witness.size() == 1);

  CHECK_THROWS_AS(quantum_weierstrass(g.truncated(N), unit(2), N, S), ValidationError);
  CHECK_THROWS_AS(quantum_weierstrass(g, unit(2), 0, S), ValidationError);
}

TEST_CASE("quantum_weierstrass: sin on the unit square") {
  const auto S = SymplecticStructure::standard(1);
  Rational last(1);
  for (int N = 1; N <= 2; ++N) {
    FormalFunction f(N + 1, SmoothRep(2));
    f[0] = SmoothRep(TrigRep::sine({1, 0}));
    auto r = quantum_weierstrass(f, unit(2), N, S);
    CHECK(r.bound.hi < weierstrass_guarantee(N));
    CHECK(r.bound.hi < last);
    last = r.bound.hi;
    CHECK(r.degrees[0] >= 4);
    for (const auto& [I, e] : r.slice_errors[0]) CHECK(e.hi < weierstrass_threshold(N));
    CHECK(evaluate_witness(r.p, S) == r.p.value);
    CHECK(SmoothRep(r.p.value[1]).is_zero());
  }
  FormalFunction f(2, SmoothRep(2));
  f[0] = SmoothRep(TrigRep::sine({1, 0}));
  WeierstrassOptions tight;
  tight.max_degree = 4;
  CHECK_THROWS_AS(quantum_weierstrass(f, unit(2), 1, S, tight), BudgetExceeded);
}

TEST_CASE("report_convergence") {
  const auto S = SymplecticStructure::standard(1);
  FormalFunction f(3, SmoothRep(2));
  f[0] = SmoothRep(TrigRep::sine({1, 0}));
  auto empty = report_convergence(f, unit(2), 2, 1, S);
  CHECK(empty.rows.empty());
  CHECK(empty.csv() == "N,bound_hi,degree,seconds\n");
  auto rep = report_convergence(f, unit(2), 1, 2, S);
  CHECK(rep.rows.size() == 2);
  CHECK(rep.monotone);
  FormalFunction g(3, SmoothRep(2));
  g[0] = x(0);
  auto pr = report_convergence(g, unit(2), 1, 2, S);
  for (const auto& row : pr.rows) CHECK(row.degree == 0);
}
