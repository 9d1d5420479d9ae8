#pragma once

// Tensor-product Bernstein approximation with certified derivative errors,
// conversion of classical polynomials into star-words of coordinates, and the
// quantum Weierstrass procedure.

#include <gmpxx.h>

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "deformq/coeffring.hpp"
#include "deformq/formal.hpp"
#include "deformq/frechet.hpp"
#include "deformq/star.hpp"

namespace dq {

/// Samples of f on the lattice lo + (k / nu) * (hi - lo). Sample k is
/// numerators[k] * scale; the layout is row-major with the last axis fastest.
/// Axes along which f is constant carry degree 0 and a single sample.
struct BernsteinApprox {
  Box box;
  std::vector<int> nu;
  std::vector<mpz_class> numerators;
  Rational scale;
  /// True when every sample is the exact value of f.
  bool exact = true;

  int dim() const { return box.dim(); }
  PolyRep to_poly() const;
};

/// Transcendental samples are rounded to multiples of 2^-precision_bits.
BernsteinApprox bernstein_samples(const SmoothRep& f, const std::vector<int>& nu, const Box& K,
                                  long precision_bits = 128);

PolyRep bernstein(const SmoothRep& f, int nu, const Box& K);

/// Certified sup_K |d^I (f - B)| for all |I| <= order, where B is the
/// polynomial defined by `approx`. f must be real-valued.
std::map<Exponent, Enclosure> bernstein_error(const SmoothRep& f, const BernsteinApprox& approx, int order,
                                              const Rational& tol, const SupBudget& budget = {});

struct WitnessTerm {
  int hbar_power = 0;
  Rational scalar;
  /// Letter multiplicities; the word lists coordinate i letters[i] times, in increasing order.
  Exponent letters;

  std::vector<int> word() const;
  friend bool operator==(const WitnessTerm&, const WitnessTerm&) = default;
};

struct QuantumPolynomial {
  FormalFunction value = FormalFunction(0, SmoothRep(1));
  std::vector<WitnessTerm> witness;
};

QuantumPolynomial classical_to_quantum(const PolyRep& p, const SymplecticStructure& S, int N);
/// Same for a formal function whose coefficients are all polynomials.
QuantumPolynomial classical_to_quantum(const FormalFunction& p, const SymplecticStructure& S);

/// Sum of scalar * hbar^a * (x^{w_1} * ... * x^{w_m}) with every product
/// taken through the Moyal product.
FormalFunction evaluate_witness(const QuantumPolynomial& q, const SymplecticStructure& S);

struct WeierstrassOptions {
  int max_degree = 16384;
  SupBudget budget;
};

struct WeierstrassResult {
  QuantumPolynomial p;
  Enclosure bound;
  /// Bernstein degree used per hbar-slice (0 when the slice was already polynomial).
  std::vector<int> degrees;
  /// Certified sup |d^I (f_m - p_m)| per slice, |I| <= N+1.
  std::vector<std::map<Exponent, Enclosure>> slice_errors;
};

/// Per-slice derivative threshold 1 / ((N+2) 2^{N+1}).
Rational weierstrass_threshold(int N);
/// (N+3) / 2^{N+1} + 2^{-(N+1)}.
Rational weierstrass_guarantee(int N);

/// f must have order >= N+1.
WeierstrassResult quantum_weierstrass(const FormalFunction& f, const Box& K, int N, const SymplecticStructure& S,
                                      const WeierstrassOptions& opt = {});

struct ConvergenceRow {
  int N = 0;
  Rational bound_hi;
  int degree = 0;
  double seconds = 0.0;
};

struct ConvergenceReport {
  std::vector<ConvergenceRow> rows;
  bool monotone = true;
  std::string csv() const;
};

ConvergenceReport report_convergence(const FormalFunction& f, const Box& K, int N_from, int N_to,
                                     const SymplecticStructure& S, const WeierstrassOptions& opt = {});

}  // namespace dq
