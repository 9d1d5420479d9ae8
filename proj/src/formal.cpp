#include "deformq/formal.hpp"

namespace dq {

FormalFunction constant_series(const SmoothRep& f, int N) { return FormalFunction::monomial(N, 0, f); }

Rational scalar_seminorm(const ScalarSeries& phi, int n) {
  if (n < 0 || n > phi.order()) throw ValidationError("semi-norm index beyond truncation order (tail unknown)");
  Rational m(0);
  for (int k = 0; k <= n; ++k) m = std::max(m, abs(phi[k]));
  return m;
}

Enclosure scalar_seminorm(const ComplexSeries& phi, int n, const Rational& tol) {
  if (n < 0 || n > phi.order()) throw ValidationError("semi-norm index beyond truncation order (tail unknown)");
  Rational m2(0);
  for (int k = 0; k <= n; ++k) m2 = std::max(m2, phi[k].norm2());
  if (phi.order() >= 0 && m2 == 0) return Enclosure::point(0);
  return sqrt_enclosure(m2, tol);
}

int max_poly_degree(const FormalFunction& f) {
  int d = -1;
  for (const auto& c : f.coeffs()) d = std::max(d, c.poly_degree());
  return d;
}

}  // namespace dq
