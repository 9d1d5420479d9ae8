#include "doctest.h"

#include "deformq/random.hpp"
#include "deformq/trace.hpp"

using namespace dq;

namespace {

Rational q(long a, long b = 1) { return make_rational(a, b); }
SmoothRep mode(Exponent k, ComplexRational c = ComplexRational(Rational(1))) { return SmoothRep(TrigRep::mode(std::move(k), c)); }
FormalFunction lift(const SmoothRep& f, int N) { return constant_series(f, N); }

}  // namespace

TEST_CASE("renormalized trace: examples") {
  const auto S = SymplecticStructure::standard(1);
  const TraceValue one = renormalized_trace(lift(SmoothRep::constant(2, 1), 3), S, 1);
  CHECK(one.twopi_pow == 2);
  CHECK(one.coeffs[0] == ComplexRational(q(1)));
  for (int l = 1; l <= 3; ++l) CHECK(one.coeffs[l].is_zero());

  CHECK(renormalized_trace(lift(mode({1, -2}), 3), S, 1).is_zero());
  CHECK(renormalized_trace(lift(SmoothRep(TrigRep::cosine({0, 1})), 3), S, 1).is_zero());

  const TraceValue h = renormalized_trace(FormalFunction::monomial(3, 1, SmoothRep::constant(2, 1)), S, 1);
  CHECK(h.coeffs[0].is_zero());
  CHECK(h.coeffs[1] == ComplexRational(q(1)));
  CHECK(h.coeffs[2].is_zero());

  const auto S2 = SymplecticStructure::standard(2);
  const TraceValue t2 = renormalized_trace(lift(SmoothRep::constant(4, q(3, 5)), 1), S2, 2);
  CHECK(t2.twopi_pow == 4);
  CHECK(t2.coeffs[0] == ComplexRational(q(6, 5)));

  Matrix w = {{q(0), q(2)}, {q(-2), q(0)}};
  const auto Sw = SymplecticStructure::from_lower(w);
  CHECK(renormalized_trace(lift(SmoothRep::constant(2, 1), 1), Sw, 1).coeffs[0] == ComplexRational(q(2)));

  CHECK_THROWS_AS(renormalized_trace(lift(PolyRep::coordinate(2, 0), 1), S, 1), ValidationError);
  CHECK_THROWS_AS(renormalized_trace(lift(SmoothRep::constant(2, 1), 1), S, 2), DimensionMismatch);
}

TEST_CASE("renormalized trace: linearity and normalization") {
  RandomSource rng(3);
  const auto S = SymplecticStructure::standard(1);
  for (int trial = 0; trial < 30; ++trial) {
    const FormalFunction f = rng.formal_trig(2, 3, 2, 3);
    const FormalFunction g = rng.formal_trig(2, 3, 2, 3);
    const Rational a = rng.rational();
    const TraceValue tf = renormalized_trace(f, S, 1), tg = renormalized_trace(g, S, 1);
    const TraceValue ts = renormalized_trace(f + g.scaled(a), S, 1);
    CHECK(ts.coeffs == tf.coeffs + tg.coeffs.scaled(ComplexRational(a)));
    CHECK(tf.coeffs[0] == f[0].trig_part().zero_mode() + ComplexRational(f[0].poly_part().constant_term()));
  }
}

TEST_CASE("cyclicity defect vanishes") {
  const auto S = SymplecticStructure::standard(1);
  const int N = 3;
  for (int a = -2; a <= 2; ++a) {
    for (int b = -2; b <= 2; ++b) {
      for (int c = -2; c <= 2; ++c) {
        for (int d = -2; d <= 2; ++d) {
          const FormalFunction f = lift(mode({a, b}), N), g = lift(mode({c, d}, {q(1, 2), q(-3)}), N);
          CHECK(cyclicity_defect(f, g, S, 1).is_zero());
        }
      }
    }
  }
  RandomSource rng(8);
  bool nontrivial = false;
  for (int trial = 0; trial < 30; ++trial) {
    const FormalFunction f = rng.formal_trig(2, 4, 3, 3), g = rng.formal_trig(2, 4, 3, 3);
    CHECK(cyclicity_defect(f, g, S, 1).is_zero());
    CHECK(cyclicity_defect(f, f, S, 1).is_zero());
    if (!commutator(f, g, S).is_zero()) nontrivial = true;
  }
  CHECK(nontrivial);
  const auto S2 = SymplecticStructure::standard(2);
  for (int trial = 0; trial < 5; ++trial) {
    CHECK(cyclicity_defect(rng.formal_trig(4, 2, 1, 3), rng.formal_trig(4, 2, 1, 3), S2, 2).is_zero());
  }
}

TEST_CASE("trace continuity") {
  const Atlas T = Atlas::torus(2);
  const auto one = trace_continuity_check(lift(SmoothRep::constant(2, 1), 2), 0, T);
  CHECK(one.holds);
  CHECK(one.lhs == torus_volume(SymplecticStructure::standard(1)));
  CHECK(one.rhs == one.lhs);

  const auto zero_mean = trace_continuity_check(lift(SmoothRep(TrigRep::sine({1, 1})), 2), 1, T);
  CHECK(zero_mean.holds);
  CHECK(zero_mean.lhs == Enclosure::point(0));

  RandomSource rng(21);
  const auto S = SymplecticStructure::standard(1);
  NormOptions opt;
  opt.tol = q(1, 10000);
  for (int trial = 0; trial < 8; ++trial) {
    const FormalFunction f = rng.formal_trig(2, 3, 2, 2);
    for (int l = 0; l <= 3; ++l) {
      const auto r = trace_continuity_check(f, l, T, opt);
      CHECK(r.holds);
      CHECK(r.lhs.hi <= r.rhs.hi);
      const Enclosure s = scalar_trace_seminorm(renormalized_trace(f, S, 1), l);
      CHECK(s.lo <= (l + 1) * r.rhs.hi);
    }
  }
  CHECK_THROWS_AS(trace_continuity_check(lift(SmoothRep::constant(2, 1), 1), 0, Atlas::default_flat(2)),
                  ValidationError);
}

TEST_CASE("scalar trace semi-norm") {
  TraceValue zero{ComplexSeries(3, ComplexRational()), 2};
  CHECK(scalar_trace_seminorm(zero, 3) == Enclosure::point(0));
  TraceValue high = zero;
  high.coeffs[2] = ComplexRational(q(5));
  CHECK(scalar_trace_seminorm(high, 1) == Enclosure::point(0));
  CHECK(scalar_trace_seminorm(high, 2) == scale_nonneg(twopi_power(2), q(5)));
  const auto S = SymplecticStructure::standard(1);
  const TraceValue one = renormalized_trace(lift(SmoothRep::constant(2, 1), 3), S, 1);
  for (int l = 0; l <= 3; ++l) CHECK(scalar_trace_seminorm(one, l) == torus_volume(S));
  CHECK_THROWS_AS(scalar_trace_seminorm(one, 4), ValidationError);
  const Enclosure v = torus_volume(S);
  CHECK(v.lo < Rational(3948, 100));
  CHECK(v.hi > Rational(3947, 100));
}
