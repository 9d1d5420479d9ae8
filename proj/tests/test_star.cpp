#include "doctest.h"

#include "deformq/random.hpp"
#include "deformq/star.hpp"

using namespace dq;

namespace {

SmoothRep x(int dim, int i) { return PolyRep::coordinate(dim, i); }
FormalFunction lift(const SmoothRep& f, int N = 4) { return constant_series(f, N); }

}  // namespace

TEST_CASE("symplectic structures") {
  auto S = SymplecticStructure::standard(2);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      Rational s(0);
      for (int k = 0; k < 4; ++k) s += S.upper(i, k) * S.lower(k, j);
      CHECK(s == (i == j ? 1 : 0));
    }
  }
  CHECK(S.upper(0, 1) == -1);
  CHECK(S.pfaffian() == 1);
  CHECK(S.is_standard());
  Matrix bad{{Rational(0), Rational(1)}, {Rational(1), Rational(0)}};
  CHECK_THROWS_AS(SymplecticStructure::from_lower(bad), ValidationError);
  Matrix sing{{Rational(0), Rational(0)}, {Rational(0), Rational(0)}};
  CHECK_THROWS_AS(SymplecticStructure::from_lower(sing), ValidationError);
  auto T = SymplecticStructure::from_lower({{Rational(0), Rational(3)}, {Rational(-3), Rational(0)}});
  CHECK(T.upper(0, 1) == make_rational(-1, 3));
  CHECK(T.pfaffian() == 3);
}

TEST_CASE("poisson bracket") {
  auto S = SymplecticStructure::standard(1);
  RandomSource rng(3);
  SmoothRep f = rng.poly(2, 4, 5);
  CHECK(poisson(f, f, S).is_zero());
  CHECK(poisson(x(2, 0), x(2, 1), S) == SmoothRep::constant(2, S.upper(0, 1)));
  CHECK(poisson(SmoothRep::constant(2, 5), f, S).is_zero());
  CHECK_THROWS_AS(poisson(x(4, 0), x(4, 1), S), DimensionMismatch);
}

TEST_CASE("moyal components") {
  auto S = SymplecticStructure::standard(1);
  RandomSource rng(4);
  for (int t = 0; t < 20; ++t) {
    SmoothRep f = rng.poly(2, 4, 4), g = rng.poly(2, 4, 4);
    CHECK(moyal_component(f, g, 0, S) == f * g);
    CHECK(moyal_component(f, g, 1, S) - moyal_component(g, f, 1, S) == poisson(f, g, S));
    CHECK(moyal_component(f, g, f.poly().degree() + 1, S).is_zero());
    SmoothRep a = rng.trig(2, 2, 3), b = rng.trig(2, 2, 3);
    CHECK(moyal_component(a, b, 1, S) - moyal_component(b, a, 1, S) == poisson(a, b, S));
  }
  // C_2(x^2, y^2) = 2^{-2}/2! * (omega^{12})^2 * 2 * 2 = 1/2
  SmoothRep xx = x(2, 0) * x(2, 0), yy = x(2, 1) * x(2, 1);
  CHECK(moyal_component(xx, yy, 2, S) == SmoothRep::constant(2, make_rational(1, 2)));
}

TEST_CASE("moyal product") {
  auto S = SymplecticStructure::standard(1);
  RandomSource rng(8);
  FormalFunction one = lift(SmoothRep::constant(2, 1));
  FormalFunction f = rng.formal_poly(2, 4, 3, 4);
  CHECK(moyal(one, f, S) == f);
  CHECK(moyal(f, one, S) == f);
  FormalFunction c = commutator(lift(x(2, 0)), lift(x(2, 1)), S);
  CHECK(c == FormalFunction::monomial(4, 1, SmoothRep::constant(2, S.upper(0, 1))));
  FormalFunction xi = lift(x(2, 0));
  CHECK(moyal(xi, xi, S) == lift(x(2, 0) * x(2, 0)));
  CHECK(commutator(f, f, S).is_zero());
  for (int t = 0; t < 10; ++t) {
    FormalFunction a = rng.formal_poly(2, 3, 3, 3), b = rng.formal_poly(2, 3, 3, 3);
    CHECK(commutator(a, b, S)[1] == poisson(a[0], b[0], S));
  }
}

TEST_CASE("associativity on small inputs") {
  auto S = SymplecticStructure::standard(1);
  RandomSource rng(9);
  for (int t = 0; t < 5; ++t) {
    FormalFunction a = rng.formal_poly(2, 3, 3, 3), b = rng.formal_poly(2, 3, 3, 3), c = rng.formal_poly(2, 3, 3, 3);
    CHECK(moyal(moyal(a, b, S), c, S) == moyal(a, moyal(b, c, S), S));
    FormalFunction p = rng.formal_trig(2, 3, 2, 2), q = rng.formal_trig(2, 3, 2, 2), r = rng.formal_trig(2, 3, 2, 2);
    CHECK(moyal(moyal(p, q, S), r, S) == moyal(p, moyal(q, r, S), S));
  }
  auto T = SymplecticStructure::standard(2);
  FormalFunction a = rng.formal_poly(4, 2, 3, 3), b = rng.formal_poly(4, 2, 3, 3), c = rng.formal_poly(4, 2, 3, 3);
  CHECK(moyal(moyal(a, b, T), c, T) == moyal(a, moyal(b, c, T), T));
}
