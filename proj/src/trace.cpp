#include "deformq/trace.hpp"

#include <algorithm>

namespace dq {

namespace {

Rational factorial(int n) {
  Rational r(1);
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

ComplexRational zero_mode(const SmoothRep& c) {
  const PolyRep p = c.poly_part();
  if (p.degree() > 0) throw ValidationError("trace needs trigonometric coefficients");
  return c.trig_part().zero_mode() + ComplexRational(p.constant_term());
}

Enclosure modulus(const ComplexRational& z, const Rational& tol) {
  if (z.is_real()) return Enclosure::point(abs(z.re));
  return sqrt_enclosure(z.norm2(), tol);
}

}  // namespace

Enclosure twopi_power(int p) {
  if (p < 0) throw ValidationError("negative power of 2 pi");
  const Enclosure& pi = pi_enclosure();
  return {pow(2 * pi.lo, static_cast<unsigned>(p)), pow(2 * pi.hi, static_cast<unsigned>(p))};
}

Enclosure torus_volume(const SymplecticStructure& S) {
  return scale_nonneg(twopi_power(2 * S.n()), factorial(S.n()) * abs(S.pfaffian()));
}

TraceValue renormalized_trace(const FormalFunction& f, const SymplecticStructure& S, int n) {
  if (n != S.n()) throw DimensionMismatch("n differs from the symplectic structure");
  const Rational c = factorial(n) * S.pfaffian();
  TraceValue t{ComplexSeries(f.order(), ComplexRational()), 2 * n};
  for (int l = 0; l <= f.order(); ++l) {
    if (f[l].dim() != S.dim()) throw DimensionMismatch("function dimension differs from 2n");
    t.coeffs[l] = zero_mode(f[l]) * ComplexRational(c);
  }
  return t;
}

TraceValue cyclicity_defect(const FormalFunction& f, const FormalFunction& g, const SymplecticStructure& S, int n) {
  return renormalized_trace(commutator(f, g, S), S, n);
}

TraceContinuity trace_continuity_check(const FormalFunction& f, int l, const Atlas& A, const NormOptions& opt,
                                       const std::optional<SymplecticStructure>& S) {
  if (A.manifold != Manifold::torus) throw ValidationError("trace continuity needs a torus atlas");
  A.validate();
  if (A.dim() % 2 != 0) throw DimensionMismatch("torus dimension must be even");
  const SymplecticStructure omega = S ? *S : SymplecticStructure::standard(A.dim() / 2);
  if (l < 0 || l > f.order()) throw ValidationError("trace coefficient index outside [0, N]");
  const ComplexRational z = zero_mode(f[l]);
  const Enclosure vol = torus_volume(omega);
  const bool constant = f[l].constant_value().has_value();
  TraceContinuity out;
  NormOptions o = opt;
  o.tol = std::max(opt.tol, Rational(1));
  for (;;) {
    const Enclosure mean = modulus(z, o.tol);
    const Enclosure norm = formal_seminorm(f, l, A, o);
    out.lhs = mul_nonneg(mean, vol);
    out.rhs = mul_nonneg(norm, vol);
    // A constant f_l has |mean| = ||f_l||_0 <= ||f||_{hbar,l} exactly.
    out.holds = mean.hi <= norm.lo || constant;
    if (out.holds || o.tol <= opt.tol) break;
    o.tol = std::max<Rational>(opt.tol, o.tol / 16);
  }
  return out;
}

Enclosure scalar_trace_seminorm(const TraceValue& t, int l, const Rational& tol) {
  if (l < 0 || l > t.coeffs.order()) throw ValidationError("semi-norm index exceeds the truncation order");
  Enclosure m = Enclosure::point(0);
  for (int k = 0; k <= l; ++k) m = hull_max(m, modulus(t.coeffs[k], tol));
  return mul_nonneg(m, twopi_power(t.twopi_pow));
}

}  // namespace dq
