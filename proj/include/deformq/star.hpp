#pragma once

// Moyal-Weyl star product on a flat symplectic chart.

#include <memory>
#include <mutex>
#include <vector>

#include "deformq/coeffring.hpp"
#include "deformq/formal.hpp"

namespace dq {

using Matrix = std::vector<std::vector<Rational>>;

/// Exact inverse by Gauss-Jordan elimination; throws ValidationError if singular.
Matrix inverse(const Matrix& m);

/// One term of the order-k bidifferential operator: coeff * d^left f * d^right g.
struct MoyalPattern {
  Rational coeff;
  Exponent left;
  Exponent right;
};

class SymplecticStructure {
 public:
  /// omega = sum_i dx^{2i} ^ dx^{2i+1} (0-based), i.e. lower[2i][2i+1] = 1.
  static SymplecticStructure standard(int n);
  /// Any constant antisymmetric invertible 2n x 2n matrix omega_{ij}.
  static SymplecticStructure from_lower(Matrix lower);

  int n() const { return n_; }
  int dim() const { return 2 * n_; }
  const Matrix& lower() const { return lower_; }
  const Matrix& upper() const { return upper_; }
  const Rational& lower(int i, int j) const { return lower_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; }
  const Rational& upper(int i, int j) const { return upper_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; }
  /// Pfaffian of omega_{ij}; omega^n / n! = Pf * dx^1 ^ ... ^ dx^{2n}.
  Rational pfaffian() const;
  bool is_standard() const;

  /// Terms of C_k = 2^{-k}/k! (omega^{ij} d_i (x) d_j)^k, merged by derivative pair.
  const std::vector<MoyalPattern>& patterns(int k) const;

  friend bool operator==(const SymplecticStructure& a, const SymplecticStructure& b) { return a.lower_ == b.lower_; }

 private:
  SymplecticStructure(int n, Matrix lower, Matrix upper);

  int n_;
  Matrix lower_;
  Matrix upper_;
  struct Cache {
    std::mutex mu;
    std::vector<std::unique_ptr<std::vector<MoyalPattern>>> by_order;
  };
  std::shared_ptr<Cache> cache_;
};

SmoothRep poisson(const SmoothRep& f, const SmoothRep& g, const SymplecticStructure& S);
SmoothRep moyal_component(const SmoothRep& f, const SmoothRep& g, int k, const SymplecticStructure& S);
FormalFunction moyal(const FormalFunction& f, const FormalFunction& g, const SymplecticStructure& S);
FormalFunction commutator(const FormalFunction& f, const FormalFunction& g, const SymplecticStructure& S);

}  // namespace dq
