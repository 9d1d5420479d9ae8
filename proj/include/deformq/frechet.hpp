#pragma once

// Semi-norms of smooth and formal functions over an atlas of boxes, the
// Frechet metric, and continuity ratios of the star product.

#include <vector>

#include "deformq/coeffring.hpp"
#include "deformq/formal.hpp"
#include "deformq/star.hpp"

namespace dq {

enum class Manifold { flat_chart, torus };

struct Atlas {
  Manifold manifold = Manifold::flat_chart;
  std::vector<Box> charts;

  /// Charts [-(i+1), i+1]^dim for i = 0..3.
  static Atlas default_flat(int dim);
  /// Single chart [0, 710/113]^dim, which contains a full period 2 pi.
  static Atlas torus(int dim);
  /// Single chart K.
  static Atlas single(const Box& K);

  int dim() const { return charts.empty() ? 0 : charts.front().dim(); }
  /// Throws ValidationError on an empty atlas, mixed dims, or a torus chart 0
  /// that does not contain a fundamental domain.
  void validate() const;
};

struct NormOptions {
  Rational tol = make_rational(1, 1000000);
  SupBudget budget;
};

/// ||f||_l: max over |I| <= l and charts 0..min(l, last) of sup |d^I f|.
Enclosure smooth_seminorm(const SmoothRep& f, int l, const Atlas& A, const NormOptions& opt = {});
/// ||f||_0 .. ||f||_L, sharing suprema between orders.
std::vector<Enclosure> smooth_seminorms(const SmoothRep& f, int L, const Atlas& A, const NormOptions& opt = {});

/// ||f||_{hbar,k} = sum_{i+j=k} ||f_i||_j; k must not exceed the truncation order.
Enclosure formal_seminorm(const FormalFunction& f, int k, const Atlas& A, const NormOptions& opt = {});
/// ||f||_{hbar,0} .. ||f||_{hbar,K}.
std::vector<Enclosure> formal_seminorms(const FormalFunction& f, int K, const Atlas& A, const NormOptions& opt = {});

/// d(f, g) = sum_k 2^{-k} s_k / (1 + s_k) with s_k = ||f - g||_{hbar,k}; terms
/// k <= min(K_terms, N) are computed, the rest bounded by the tail 2^{-K}.
Enclosure frechet_distance(const FormalFunction& f, const FormalFunction& g, const Atlas& A, int K_terms,
                           const NormOptions& opt = {});
/// The same with every supremum taken over K.
Enclosure compact_distance(const FormalFunction& f, const FormalFunction& g, const Box& K, int K_terms,
                           const NormOptions& opt = {});
/// Distance from per-order semi-norm enclosures s_0..s_K (tail 2^{-K} added).
Enclosure distance_from_seminorms(const std::vector<Enclosure>& s);

/// ||f*g||_{hbar,l} / (||f||_{hbar,l} ||g||_{hbar,l}).
Enclosure continuity_ratio(const FormalFunction& f, const FormalFunction& g, int l, const Atlas& A,
                           const SymplecticStructure& S, const NormOptions& opt = {});

}  // namespace dq
