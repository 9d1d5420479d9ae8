#pragma once

// Truncated power series in hbar over a coefficient ring. A series of order
// N stores the coefficients of hbar^0 .. hbar^N; binary operations truncate
// to the smaller order of their operands.

#include <algorithm>
#include <utility>
#include <vector>

#include "deformq/coeffring.hpp"
#include "deformq/rational.hpp"

namespace dq {

inline constexpr int kDefaultOrder = 4;

inline Rational zero_like(const Rational&) { return Rational(0); }
inline ComplexRational zero_like(const ComplexRational&) { return {}; }
inline SmoothRep zero_like(const SmoothRep& f) { return SmoothRep(f.dim()); }

inline bool coeff_is_zero(const Rational& c) { return sgn(c) == 0; }
inline bool coeff_is_zero(const ComplexRational& c) { return c.is_zero(); }
inline bool coeff_is_zero(const SmoothRep& c) { return c.is_zero(); }

template <class Coeff>
class FormalSeries {
 public:
  /// Order-N series with every coefficient equal to `zero`.
  FormalSeries(int N, const Coeff& zero) : coeffs_(check_order(N) + 1, zero) {}
  explicit FormalSeries(std::vector<Coeff> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) throw ValidationError("formal series needs at least one coefficient");
  }
  /// c * hbar^k at order N.
  static FormalSeries monomial(int N, int k, const Coeff& c) {
    FormalSeries s(N, zero_like(c));
    if (k < 0) throw ValidationError("negative hbar power");
    if (k <= N) s.coeffs_[static_cast<std::size_t>(k)] = c;
    return s;
  }

  int order() const { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<Coeff>& coeffs() const { return coeffs_; }
  const Coeff& operator[](int i) const { return coeffs_.at(static_cast<std::size_t>(i)); }
  Coeff& operator[](int i) { return coeffs_.at(static_cast<std::size_t>(i)); }
  bool is_zero() const {
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Coeff& c) { return coeff_is_zero(c); });
  }

  FormalSeries truncated(int M) const {
    if (M < 0 || M > order()) throw ValidationError("truncation order outside [0, N]");
    return FormalSeries(std::vector<Coeff>(coeffs_.begin(), coeffs_.begin() + M + 1));
  }

  /// hbar^k * this, keeping order N.
  FormalSeries shifted(int k) const {
    FormalSeries s(order(), zero_like(coeffs_[0]));
    for (int i = 0; i + k <= order(); ++i) s.coeffs_[static_cast<std::size_t>(i + k)] = coeffs_[static_cast<std::size_t>(i)];
    return s;
  }

  template <class Scalar>
  FormalSeries scaled(const Scalar& s) const {
    FormalSeries r = *this;
    for (auto& c : r.coeffs_) c = scale_coeff(c, s);
    return r;
  }

  friend FormalSeries operator+(const FormalSeries& a, const FormalSeries& b) {
    const int N = std::min(a.order(), b.order());
    std::vector<Coeff> out;
    out.reserve(static_cast<std::size_t>(N) + 1);
    for (int i = 0; i <= N; ++i) out.push_back(a[i] + b[i]);
    return FormalSeries(std::move(out));
  }
  friend FormalSeries operator-(const FormalSeries& a, const FormalSeries& b) {
    const int N = std::min(a.order(), b.order());
    std::vector<Coeff> out;
    out.reserve(static_cast<std::size_t>(N) + 1);
    for (int i = 0; i <= N; ++i) out.push_back(a[i] - b[i]);
    return FormalSeries(std::move(out));
  }
  /// Cauchy product c_m = sum_{i+j=m} a_i b_j.
  friend FormalSeries operator*(const FormalSeries& a, const FormalSeries& b) {
    const int N = std::min(a.order(), b.order());
    FormalSeries r(N, zero_like(a[0]));
    for (int i = 0; i <= N; ++i) {
      if (coeff_is_zero(a[i])) continue;
      for (int j = 0; i + j <= N; ++j) {
        if (coeff_is_zero(b[j])) continue;
        r.coeffs_[static_cast<std::size_t>(i + j)] += a[i] * b[j];
      }
    }
    return r;
  }
  friend bool operator==(const FormalSeries& a, const FormalSeries& b) {
    return a.order() == b.order() && a.coeffs_ == b.coeffs_;
  }

 private:
  static std::size_t check_order(int N) {
    if (N < 0) throw ValidationError("truncation order must be non-negative");
    return static_cast<std::size_t>(N);
  }
  static Rational scale_coeff(const Rational& c, const Rational& s) { return c * s; }
  static ComplexRational scale_coeff(const ComplexRational& c, const ComplexRational& s) { return c * s; }
  static SmoothRep scale_coeff(const SmoothRep& c, const Rational& s) { return c.scaled(s); }
  static SmoothRep scale_coeff(const SmoothRep& c, const ComplexRational& s) { return c.scaled(s); }

  std::vector<Coeff> coeffs_;
};

using FormalFunction = FormalSeries<SmoothRep>;
using ScalarSeries = FormalSeries<Rational>;
using ComplexSeries = FormalSeries<ComplexRational>;

enum class SeriesOp { add, cauchy_mul };

template <class Coeff>
FormalSeries<Coeff> series_arith(const FormalSeries<Coeff>& a, const FormalSeries<Coeff>& b, SeriesOp op) {
  return op == SeriesOp::add ? a + b : a * b;
}

template <class Coeff>
FormalSeries<Coeff> truncate(const FormalSeries<Coeff>& a, int M) {
  return a.truncated(M);
}

/// f as an hbar-constant formal function of order N.
FormalFunction constant_series(const SmoothRep& f, int N);

/// max_{k<=n} |phi_k|; n beyond the truncation order is rejected.
Rational scalar_seminorm(const ScalarSeries& phi, int n);
Enclosure scalar_seminorm(const ComplexSeries& phi, int n, const Rational& tol);

/// Maximum polynomial degree over all coefficients (0 for trig-only, -1 for zero).
int max_poly_degree(const FormalFunction& f);

}  // namespace dq
