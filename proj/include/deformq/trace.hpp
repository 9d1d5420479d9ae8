#pragma once

// The renormalized trace (-hbar)^n Tr on the torus T^{2n} = (R / 2 pi Z)^{2n}
// with a constant symplectic structure and the Moyal product.

#include <optional>

#include "deformq/formal.hpp"
#include "deformq/frechet.hpp"
#include "deformq/star.hpp"

namespace dq {

/// Coefficient k is coeffs[k] * (2 pi)^twopi_pow.
struct TraceValue {
  ComplexSeries coeffs;
  int twopi_pow = 0;

  bool is_zero() const { return coeffs.is_zero(); }
  friend bool operator==(const TraceValue& a, const TraceValue& b) {
    return a.twopi_pow == b.twopi_pow && a.coeffs == b.coeffs;
  }
};

/// Enclosure of (2 pi)^p.
Enclosure twopi_power(int p);
/// Vol = n! |Pf| (2 pi)^{2n} = integral of omega^n over the torus.
Enclosure torus_volume(const SymplecticStructure& S);

/// Coefficient l is n! Pf (2 pi)^{2n} times the zero Fourier mode of f_l.
TraceValue renormalized_trace(const FormalFunction& f, const SymplecticStructure& S, int n);
TraceValue cyclicity_defect(const FormalFunction& f, const FormalFunction& g, const SymplecticStructure& S, int n);

struct TraceContinuity {
  bool holds = false;
  Enclosure lhs;
  Enclosure rhs;
};

/// |coefficient_l| <= Vol * ||f||_{hbar,l} on a torus atlas. Tolerances are refined
/// from 1 down to opt.tol until the inequality is decided.
TraceContinuity trace_continuity_check(const FormalFunction& f, int l, const Atlas& A, const NormOptions& opt = {},
                                       const std::optional<SymplecticStructure>& S = std::nullopt);

/// max_{k<=l} |t_k| with (2 pi)^p expanded.
Enclosure scalar_trace_seminorm(const TraceValue& t, int l, const Rational& tol = make_rational(1, 1000000000000L));

}  // namespace dq
