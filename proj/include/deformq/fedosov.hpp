#pragma once

// Fedosov connections D = nabla - delta + (1/hbar)[I, -] on the Weyl bundle
// of a flat chart, flat sections by the weight recursion, and quantizability.

#include <optional>
#include <vector>

#include "deformq/weyl.hpp"

namespace dq {

/// Gamma^k_{ij}, symmetric in i and j.
class Christoffel {
 public:
  explicit Christoffel(int dim);
  int dim() const { return dim_; }
  const SmoothRep& operator()(int k, int i, int j) const;
  /// Sets Gamma^k_{ij} and Gamma^k_{ji}.
  void set(int k, int i, int j, const SmoothRep& g);
  bool is_zero() const;

 private:
  std::size_t index(int k, int i, int j) const;
  int dim_;
  std::vector<SmoothRep> g_;
};

struct FedosovData {
  SymplecticStructure S;
  std::optional<Christoffel> christoffel;
  /// Correction 1-form; every term must have |J| = 1 and weight >= 3.
  std::optional<WeylElement> I;

  static FedosovData flat(const SymplecticStructure& S) { return {S, std::nullopt, std::nullopt}; }
  int dim() const { return S.dim(); }
  bool is_flat() const { return (!christoffel || christoffel->is_zero()) && (!I || I->is_zero()); }
  /// Throws ValidationError when the invariants fail.
  void validate() const;
  /// Gamma-tilde = 1/2 omega_{kl} Gamma^l_{ij} y^k y^j dx^i.
  WeylElement connection_form(int cap) const;
};

WeylElement covariant_derivative(const WeylElement& a, const FedosovData& F);

/// O_f up to weight W; its symbol is f.
WeylElement flat_section(const FormalFunction& f, const FedosovData& F, int W);
/// D(O) restricted to weights <= cap - 1 (the part determined by the stored terms).
WeylElement check_flat(const WeylElement& O, const FedosovData& F);

struct StarViaFlat {
  FormalFunction value;
  bool cap_sufficient;
  int cap;
};
/// sigma(O_f * O_g); W defaults to 2N + deg f + deg g.
StarViaFlat star_via_flat_sections(const FormalFunction& f, const FormalFunction& g, const FedosovData& F,
                                   std::optional<int> W = std::nullopt);

struct Quantizability {
  bool yes;
  /// Highest non-vanishing weight of O_f when yes.
  int weight;
  int checked_up_to;
};
Quantizability is_quantizable(const FormalFunction& f, const FedosovData& F, int W_max);

/// Compares the weight-m components of O_f and O_{f + p} at x0, where p
/// vanishes to order m + 1 at x0 (default sum_i (x^i - x0^i)^{m+1}).
bool jet_locality_test(const FormalFunction& f, const std::vector<Rational>& x0, int m, const FedosovData& F,
                       const std::optional<SmoothRep>& perturbation = std::nullopt);

}  // namespace dq
