#pragma once

// Sections of the formal Weyl bundle with form directions: finite sums of
// hbar^k y^I dx^J with function coefficients. J is stored as a bitmask over
// the 2n form directions in increasing index order. Weight is 2k + |I|.

#include <cstdint>
#include <map>
#include <tuple>

#include "deformq/coeffring.hpp"
#include "deformq/formal.hpp"
#include "deformq/star.hpp"

namespace dq {

struct WeylKey {
  int k = 0;
  Exponent y;
  std::uint32_t dx = 0;

  int weight() const { return 2 * k + total_degree(y); }
  int form_degree() const;
  friend bool operator<(const WeylKey& a, const WeylKey& b) {
    return std::tie(a.k, a.y, a.dx) < std::tie(b.k, b.y, b.dx);
  }
  friend bool operator==(const WeylKey& a, const WeylKey& b) = default;
};

/// Bitmask with the given (distinct) form indices.
std::uint32_t dx_mask(std::initializer_list<int> indices);
std::vector<int> dx_indices(std::uint32_t mask);

class WeylElement {
 public:
  using Terms = std::map<WeylKey, SmoothRep>;

  WeylElement(int dim, int cap);
  /// f placed at weight 0 (no y, no dx).
  static WeylElement function(const SmoothRep& f, int cap);
  /// sum_k hbar^k f_k; terms with 2k > cap are dropped.
  static WeylElement formal(const FormalFunction& f, int cap);
  static WeylElement monomial(int dim, int cap, WeylKey key, const SmoothRep& c);
  static WeylElement y(int dim, int cap, int i);
  static WeylElement dx(int dim, int cap, int i);

  int dim() const { return dim_; }
  int cap() const { return cap_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  /// Set when some non-zero contribution above the weight cap was discarded.
  bool truncated() const { return truncated_; }
  void mark_truncated() { truncated_ = true; }

  /// Adds c at key; contributions above the cap are dropped (and flagged).
  void add(const WeylKey& key, const SmoothRep& c);
  WeylElement with_cap(int cap) const;

  WeylElement weight_component(int m) const;
  WeylElement form_component(int q) const;
  /// Largest weight among stored terms, -1 if zero.
  int max_weight() const;

  WeylElement& operator+=(const WeylElement& o);
  WeylElement& operator-=(const WeylElement& o);
  friend WeylElement operator+(WeylElement a, const WeylElement& b) { return a += b; }
  friend WeylElement operator-(WeylElement a, const WeylElement& b) { return a -= b; }
  WeylElement scaled(const Rational& s) const;
  /// hbar^j * this.
  WeylElement hbar_shifted(int j) const;
  /// Equality of term maps (the truncation flag is not compared).
  friend bool operator==(const WeylElement& a, const WeylElement& b);

 private:
  int dim_;
  int cap_;
  Terms terms_;
  bool truncated_ = false;
};

/// Fiberwise Moyal-Weyl product; the result cap is the smaller of the two caps.
WeylElement fiberwise_moyal(const WeylElement& a, const WeylElement& b, const SymplecticStructure& S);
/// Graded commutator a*b - (-1)^{|a||b|} b*a.
WeylElement graded_commutator(const WeylElement& a, const WeylElement& b, const SymplecticStructure& S);
/// [a, b] / hbar; the commutator is computed two weights beyond the cap so the
/// quotient is complete up to the cap. Throws ValidationError on a non-zero hbar^0 part.
WeylElement bracket_over_hbar(const WeylElement& a, const WeylElement& b, const SymplecticStructure& S);

WeylElement delta(const WeylElement& a);
WeylElement delta_star(const WeylElement& a);
WeylElement delta_inv(const WeylElement& a);
/// de Rham differential in x acting on coefficients: dx^i ^ d_{x^i}.
WeylElement exterior_derivative(const WeylElement& a);

/// Terms with no y and no dx as a formal function of order N.
FormalFunction symbol(const WeylElement& a, int N);
/// Order floor(cap/2).
FormalFunction symbol(const WeylElement& a);

}  // namespace dq
