#pragma once

// Exact coefficient functions: multivariate polynomials and trigonometric
// polynomials with rational coefficients, their finite sums, derivatives,
// evaluation, jets and certified supremum enclosures over boxes.
//
// Coordinates and frequencies are indexed from 0. A TrigRep mode k with
// coefficient c stands for c * exp(i <k, x>).

#include <chrono>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "deformq/interval.hpp"
#include "deformq/rational.hpp"

namespace dq {

Interval to_interval(const Rational& q);

class PolyRep {
 public:
  using Terms = std::map<Exponent, Rational>;

  explicit PolyRep(int dim);
  static PolyRep constant(int dim, const Rational& c);
  static PolyRep coordinate(int dim, int i);
  static PolyRep monomial(Exponent e, const Rational& c);

  int dim() const { return dim_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  Rational constant_term() const;
  /// Total degree; -1 for the zero polynomial.
  int degree() const;

  void add_term(const Exponent& e, const Rational& c);

  PolyRep& operator+=(const PolyRep& o);
  PolyRep& operator-=(const PolyRep& o);
  PolyRep& operator*=(const Rational& s);
  friend PolyRep operator+(PolyRep a, const PolyRep& b) { return a += b; }
  friend PolyRep operator-(PolyRep a, const PolyRep& b) { return a -= b; }
  friend PolyRep operator-(PolyRep a) { return a *= Rational(-1); }
  friend PolyRep operator*(const PolyRep& a, const PolyRep& b);
  friend PolyRep operator*(PolyRep a, const Rational& s) { return a *= s; }
  friend bool operator==(const PolyRep& a, const PolyRep& b) { return a.dim_ == b.dim_ && a.terms_ == b.terms_; }

  PolyRep derivative(int i) const;
  PolyRep derivative(const Exponent& multi) const;
  Rational evaluate(std::span<const Rational> x) const;
  Interval evaluate(std::span<const Interval> x) const;

 private:
  int dim_;
  Terms terms_;
};

class TrigRep {
 public:
  using Modes = std::map<Exponent, ComplexRational>;

  explicit TrigRep(int dim);
  static TrigRep mode(Exponent k, const ComplexRational& c);
  static TrigRep constant(int dim, const ComplexRational& c);
  /// sin(<k, x>) and cos(<k, x>) as real trig polynomials.
  static TrigRep sine(Exponent k);
  static TrigRep cosine(Exponent k);

  int dim() const { return dim_; }
  const Modes& modes() const { return modes_; }
  bool is_zero() const { return modes_.empty(); }
  bool is_constant() const;
  ComplexRational zero_mode() const;
  /// True iff the coefficient at -k is the conjugate of the one at k for all k.
  bool is_real_valued() const;

  void add_mode(const Exponent& k, const ComplexRational& c);

  TrigRep& operator+=(const TrigRep& o);
  TrigRep& operator-=(const TrigRep& o);
  TrigRep& operator*=(const ComplexRational& s);
  friend TrigRep operator+(TrigRep a, const TrigRep& b) { return a += b; }
  friend TrigRep operator-(TrigRep a, const TrigRep& b) { return a -= b; }
  friend TrigRep operator*(const TrigRep& a, const TrigRep& b);
  friend TrigRep operator*(TrigRep a, const ComplexRational& s) { return a *= s; }
  friend bool operator==(const TrigRep& a, const TrigRep& b) { return a.dim_ == b.dim_ && a.modes_ == b.modes_; }

  TrigRep derivative(int i) const;
  TrigRep derivative(const Exponent& multi) const;
  /// Complex value over an interval box: {re, im}.
  std::pair<Interval, Interval> evaluate(std::span<const Interval> x) const;

 private:
  int dim_;
  Modes modes_;
};

/// A polynomial plus a trigonometric polynomial. Canonical form: the
/// polynomial part has no constant term and is non-zero, the trig part is
/// non-empty; constants live in the trig part.
struct SumRep {
  PolyRep poly;
  TrigRep trig;
  friend bool operator==(const SumRep& a, const SumRep& b) { return a.poly == b.poly && a.trig == b.trig; }
};

/// Point value of a function: exact when both enclosures are points.
struct Value {
  Enclosure re;
  Enclosure im;
  bool exact() const { return re.is_point() && im.is_point(); }
  static Value exact_real(const Rational& v) { return {Enclosure::point(v), Enclosure::point(0)}; }
};

class SmoothRep {
 public:
  using Variant = std::variant<PolyRep, TrigRep, SumRep>;

  explicit SmoothRep(int dim) : rep_(PolyRep(dim)) {}
  SmoothRep(PolyRep p) : rep_(std::move(p)) {}  // NOLINT: each representation is a SmoothRep
  SmoothRep(TrigRep t) : rep_(std::move(t)) {}  // NOLINT
  static SmoothRep sum(PolyRep p, TrigRep t);
  static SmoothRep constant(int dim, const Rational& c) { return PolyRep::constant(dim, c); }

  int dim() const;
  const Variant& rep() const { return rep_; }
  bool is_poly() const { return std::holds_alternative<PolyRep>(rep_); }
  bool is_trig() const { return std::holds_alternative<TrigRep>(rep_); }
  bool is_sum() const { return std::holds_alternative<SumRep>(rep_); }
  const PolyRep& poly() const { return std::get<PolyRep>(rep_); }
  const TrigRep& trig() const { return std::get<TrigRep>(rep_); }
  /// Polynomial part and trig part (either may be zero).
  PolyRep poly_part() const;
  TrigRep trig_part() const;

  bool is_zero() const;
  /// Constant function (any representation); returns the constant if so.
  std::optional<ComplexRational> constant_value() const;
  /// Polynomial degree of the poly part; 0 for pure trig, -1 for zero.
  int poly_degree() const;

  SmoothRep& operator+=(const SmoothRep& o);
  SmoothRep& operator-=(const SmoothRep& o);
  friend SmoothRep operator+(SmoothRep a, const SmoothRep& b) { return a += b; }
  friend SmoothRep operator-(SmoothRep a, const SmoothRep& b) { return a -= b; }
  friend SmoothRep operator-(const SmoothRep& a) { return a.scaled(Rational(-1)); }
  friend SmoothRep operator*(const SmoothRep& a, const SmoothRep& b);
  SmoothRep scaled(const Rational& s) const;
  SmoothRep scaled(const ComplexRational& s) const;

  /// Semantic equality: the difference is the zero function representation.
  friend bool operator==(const SmoothRep& a, const SmoothRep& b);

  SmoothRep derivative(int i) const;
  SmoothRep derivative(const Exponent& multi) const;

  /// Complex value over an interval box (double interval arithmetic).
  std::pair<Interval, Interval> evaluate(std::span<const Interval> x) const;
  /// |f| over an interval box.
  Interval abs_value(std::span<const Interval> x) const;

 private:
  explicit SmoothRep(Variant v) : rep_(std::move(v)) {}
  void normalize();

  Variant rep_;
};

enum class RingOp { add, mul, scale };

/// Dispatcher over the ring operations; `lambda` is used only for scale.
SmoothRep ring_arith(const SmoothRep& a, const SmoothRep& b, RingOp op, const Rational& lambda = Rational(1));
SmoothRep partial_derivative(const SmoothRep& f, int i);

inline const Rational& default_eval_tol() {
  static const Rational tol = make_rational(1, 1000000000000L);
  return tol;
}

/// Exact for polynomials; certified enclosures (width <= tol) for trig parts.
Value evaluate(const SmoothRep& f, std::span<const Rational> x, const Rational& tol = default_eval_tol());

/// All partial derivatives of order <= m at x0, keyed by multi-index.
std::map<Exponent, Value> jet(const SmoothRep& f, std::span<const Rational> x0, int m,
                              const Rational& tol = default_eval_tol());

/// Flattened double-interval form of a SmoothRep for repeated evaluation.
class IntervalEvaluator {
 public:
  explicit IntervalEvaluator(const SmoothRep& f);
  /// {re, im} over an interval box.
  std::pair<Interval, Interval> evaluate(std::span<const Interval> x) const;
  Interval abs(std::span<const Interval> x) const;

 private:
  struct Term {
    Interval c;
    std::vector<std::pair<std::size_t, int>> powers;
  };
  struct Mode {
    Interval re, im;
    std::vector<std::pair<std::size_t, double>> freq;
  };
  std::vector<Term> terms_;
  std::vector<Mode> modes_;
};

/// |re + i im| for interval parts.
Interval abs_complex(const Interval& re, const Interval& im);

/// Work limits for certified suprema.
struct SupBudget {
  std::size_t max_evaluations = std::size_t{1} << 22;
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

/// Certified [lo, hi] with lo <= sup_K |f| <= hi and hi - lo <= tol.
Enclosure sup_enclosure(const SmoothRep& f, const Box& box, const Rational& tol, const SupBudget& budget = {});

namespace detail {

/// Certified supremum of a non-negative function on a box from point
/// evaluations and per-cell per-axis Lipschitz bounds. `abs_at` receives a
/// point and returns an interval containing |f(point)|; `lipschitz` receives
/// a cell and returns upper bounds on |partial_i f| over it.
struct SupProblem {
  std::function<Interval(std::span<const double>)> abs_at;
  std::function<std::vector<double>(std::span<const Interval>)> lipschitz;
  /// Optional extra upper bound on sup |f| over a cell given its centre.
  std::function<double(std::span<const Interval>, std::span<const double>)> cell_bound;
  int initial_grid = 4;
};

Enclosure branch_and_bound_sup(const SupProblem& problem, const Box& box, const Rational& tol,
                               const SupBudget& budget);

}  // namespace detail

}  // namespace dq
