#pragma once

#include <gmpxx.h>

#include <compare>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dq {

// Error categories shared by every module. The CLI maps them onto exit codes.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DimensionMismatch : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class UnrepresentableProduct : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Rational = mpq_class;

Rational make_rational(long num, long den = 1);

/// Parses "p/q" or "p" (optional sign, no decimal point).
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);

Rational abs(const Rational& q);
Rational pow(const Rational& q, unsigned e);
/// 2^e for any integer e.
Rational pow2(long e);
Rational from_double(double x);

struct ComplexRational {
  Rational re;
  Rational im;

  ComplexRational() = default;
  ComplexRational(Rational r) : re(std::move(r)) {}  // NOLINT: implicit by design of scalars
  ComplexRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

  bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
  bool is_real() const { return sgn(im) == 0; }
  ComplexRational conj() const { return {re, -im}; }
  Rational norm2() const { return re * re + im * im; }

  ComplexRational& operator+=(const ComplexRational& o);
  ComplexRational& operator-=(const ComplexRational& o);
  ComplexRational& operator*=(const ComplexRational& o);

  friend ComplexRational operator+(ComplexRational a, const ComplexRational& b) { return a += b; }
  friend ComplexRational operator-(ComplexRational a, const ComplexRational& b) { return a -= b; }
  friend ComplexRational operator*(ComplexRational a, const ComplexRational& b) { return a *= b; }
  friend ComplexRational operator-(const ComplexRational& a) { return {-a.re, -a.im}; }
  friend bool operator==(const ComplexRational& a, const ComplexRational& b) {
    return a.re == b.re && a.im == b.im;
  }
};

/// Certified interval [lo, hi] with rational endpoints.
struct Enclosure {
  Rational lo;
  Rational hi;

  Enclosure() = default;
  Enclosure(Rational l, Rational h);
  static Enclosure point(const Rational& v) { return {v, v}; }

  Rational width() const { return hi - lo; }
  bool contains(const Rational& v) const { return lo <= v && v <= hi; }
  bool overlaps(const Enclosure& o) const { return lo <= o.hi && o.lo <= hi; }
  bool is_point() const { return lo == hi; }
  double mid_double() const;

  friend Enclosure operator+(const Enclosure& a, const Enclosure& b) { return {a.lo + b.lo, a.hi + b.hi}; }
  friend bool operator==(const Enclosure& a, const Enclosure& b) { return a.lo == b.lo && a.hi == b.hi; }
};

Enclosure hull_max(const Enclosure& a, const Enclosure& b);
/// Product of two enclosures of non-negative quantities.
Enclosure mul_nonneg(const Enclosure& a, const Enclosure& b);
Enclosure scale_nonneg(const Enclosure& a, const Rational& s);
/// Enclosure of sqrt(v) for v >= 0 with width <= tol.
Enclosure sqrt_enclosure(const Rational& v, const Rational& tol);
/// Rational enclosure of pi (width below 1e-30).
const Enclosure& pi_enclosure();

/// Multi-exponent / frequency vector / multi-index.
using Exponent = std::vector<int>;

int total_degree(const Exponent& e);
/// All multi-indices of length dim with total degree <= order, graded then lexicographic.
std::vector<Exponent> multi_indices_up_to(int dim, int order);
/// All multi-indices of length dim with total degree exactly order.
std::vector<Exponent> multi_indices_of(int dim, int order);

struct Box {
  std::vector<Rational> lo;
  std::vector<Rational> hi;

  Box() = default;
  Box(std::vector<Rational> l, std::vector<Rational> h);
  static Box cube(int dim, const Rational& lo, const Rational& hi);
  int dim() const { return static_cast<int>(lo.size()); }
  bool contains(const std::vector<Rational>& x) const;
  friend bool operator==(const Box& a, const Box& b) { return a.lo == b.lo && a.hi == b.hi; }
};

}  // namespace dq
