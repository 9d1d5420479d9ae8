#include "doctest.h"

#include "deformq/random.hpp"
#include "deformq/weyl.hpp"

using namespace dq;

namespace {

const int kCap = 8;

WeylElement Y(int i, int dim = 2) { return WeylElement::y(dim, kCap, i); }
WeylElement DX(int i, int dim = 2) { return WeylElement::dx(dim, kCap, i); }
WeylElement F(const SmoothRep& f) { return WeylElement::function(f, kCap); }
WeylElement hbar(int dim = 2) {
  return WeylElement::monomial(dim, kCap, WeylKey{1, Exponent(static_cast<std::size_t>(dim), 0), 0},
                               SmoothRep::constant(dim, 1));
}

// Random element with y and dx parts and polynomial coefficients, weight <= max_w.
WeylElement random_element(RandomSource& rng, int dim, int max_w, int terms) {
  WeylElement a(dim, kCap);
  for (int t = 0; t < terms; ++t) {
    int w = static_cast<int>(rng.integer(0, max_w));
    int k = static_cast<int>(rng.integer(0, w / 2));
    Exponent y(static_cast<std::size_t>(dim), 0);
    for (int r = 0; r < w - 2 * k; ++r) y[static_cast<std::size_t>(rng.integer(0, dim - 1))] += 1;
    auto mask = static_cast<std::uint32_t>(rng.integer(0, (1 << dim) - 1));
    a.add(WeylKey{k, y, mask}, rng.poly(dim, 2, 2));
  }
  return a;
}

}  // namespace

TEST_CASE("weight components") {
  CHECK(Y(0).weight_component(1) == Y(0));
  CHECK(hbar().weight_component(2) == hbar());
  CHECK(hbar().weight_component(1).is_zero());
  RandomSource rng(1);
  WeylElement a = random_element(rng, 2, 6, 8);
  WeylElement sum(2, kCap);
  for (int m = 0; m <= kCap; ++m) sum += a.weight_component(m);
  CHECK(sum == a);
}

TEST_CASE("fiberwise product") {
  auto S = SymplecticStructure::standard(1);
  WeylElement expect = WeylElement::monomial(2, kCap, WeylKey{0, {1, 1}, 0}, SmoothRep::constant(2, 1)) +
                       hbar().scaled(S.upper(0, 1) / 2);
  CHECK(fiberwise_moyal(Y(0), Y(1), S) == expect);
  CHECK(fiberwise_moyal(DX(0), fiberwise_moyal(DX(0), Y(1), S), S).is_zero());
  CHECK(fiberwise_moyal(DX(1), DX(0), S) == fiberwise_moyal(DX(0), DX(1), S).scaled(Rational(-1)));
  RandomSource rng(2);
  WeylElement a = random_element(rng, 2, 5, 6);
  CHECK(fiberwise_moyal(F(SmoothRep::constant(2, 1)), a, S) == a);
  CHECK(fiberwise_moyal(a, F(SmoothRep::constant(2, 1)), S) == a);
}

TEST_CASE("product is weight additive and associative") {
  auto S = SymplecticStructure::standard(1);
  RandomSource rng(3);
  for (int t = 0; t < 10; ++t) {
    WeylElement a = random_element(rng, 2, 3, 4), b = random_element(rng, 2, 3, 4), c = random_element(rng, 2, 2, 3);
    WeylElement ab = fiberwise_moyal(a, b, S);
    for (int m = 0; m <= kCap; ++m) {
      WeylElement expect(2, kCap);
      for (int p = 0; p <= m; ++p) expect += fiberwise_moyal(a.weight_component(p), b.weight_component(m - p), S);
      CHECK(ab.weight_component(m) == expect);
    }
    CHECK(fiberwise_moyal(ab, c, S) == fiberwise_moyal(a, fiberwise_moyal(b, c, S), S));
  }
}

TEST_CASE("delta operators") {
  CHECK(delta(Y(0)) == DX(0));
  CHECK(delta_inv(DX(0)) == Y(0));
  CHECK(delta_inv(hbar().scaled(Rational(5))).is_zero());
  RandomSource rng(4);
  for (int t = 0; t < 10; ++t) {
    WeylElement a = random_element(rng, 4, 5, 8);
    CHECK(delta(delta(a)).is_zero());
    CHECK(delta_inv(delta_inv(a)).is_zero());
    WeylElement sym(4, kCap);
    for (const auto& [k, c] : a.terms()) {
      if (total_degree(k.y) == 0 && k.dx == 0) sym.add(k, c);
    }
    // weight cap left generous so delta_inv never truncates here
    WeylElement big = a.with_cap(kCap + 2);
    CHECK(delta(delta_inv(big)) + delta_inv(delta(big)) + sym.with_cap(kCap + 2) == big);
    for (int m = 1; m <= 5; ++m) {
      CHECK(delta(a.weight_component(m)).max_weight() <= m - 1);
      WeylElement d = delta(a.weight_component(m));
      CHECK((d.is_zero() || d.max_weight() == m - 1));
      WeylElement di = delta_inv(a.weight_component(m));
      CHECK((di.is_zero() || di.weight_component(m + 1) == di));
    }
  }
}

TEST_CASE("symbol map") {
  SmoothRep x1 = PolyRep::coordinate(2, 0);
  FormalFunction s = symbol(F(x1) + Y(0));
  CHECK(s == constant_series(x1, kCap / 2));
  CHECK(symbol(fiberwise_moyal(Y(0), Y(0), SymplecticStructure::standard(1))).is_zero());
  RandomSource rng(6);
  FormalFunction f = rng.formal_poly(2, 4, 3, 3);
  CHECK(symbol(WeylElement::formal(f, kCap), 4) == f);
}

TEST_CASE("brackets over hbar") {
  auto S = SymplecticStructure::standard(1);
  CHECK(bracket_over_hbar(Y(0), Y(1), S) == F(SmoothRep::constant(2, S.upper(0, 1))));
  RandomSource rng(7);
  WeylElement a = random_element(rng, 2, 4, 5);
  WeylElement even = a.form_component(0) + a.form_component(2);
  CHECK(bracket_over_hbar(even, even, S).is_zero());
  // graded commutators of the hbar^0 parts always cancel
  CHECK(bracket_over_hbar(F(PolyRep::coordinate(2, 0)), DX(0), S).is_zero());

  for (int n = 1; n <= 2; ++n) {
    auto T = SymplecticStructure::standard(n);
    const int d = 2 * n;
    WeylElement gen(d, kCap);
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        if (sgn(T.lower(i, j)) == 0) continue;
        Exponent e(static_cast<std::size_t>(d), 0);
        e[static_cast<std::size_t>(j)] = 1;
        gen.add(WeylKey{0, e, dx_mask({i})}, SmoothRep::constant(d, T.lower(i, j)));
      }
    }
    for (int t = 0; t < 10; ++t) {
      WeylElement m = random_element(rng, d, 4, 1);
      CHECK(bracket_over_hbar(gen, m, T) == delta(m));
    }
  }
}
