#pragma once

// Double-precision interval arithmetic with outward rounding. Every operation
// widens its result by one ulp on each side, so results always contain the
// exact real value of the operation applied to any points of the operands.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>

namespace dq {

class Interval {
 public:
  constexpr Interval() = default;
  constexpr Interval(double v) : lo_(v), hi_(v) {}  // NOLINT: points convert implicitly
  constexpr Interval(double lo, double hi) : lo_(lo), hi_(hi) {}

  static Interval hull(double a, double b) { return {std::min(a, b), std::max(a, b)}; }
  static Interval whole() {
    return {-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  }

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double mid() const { return 0.5 * lo_ + 0.5 * hi_; }
  double rad() const { return up(std::max(up(mid() - lo_), up(hi_ - mid()))); }
  double width() const { return up(hi_ - lo_); }
  /// max |x| over the interval.
  double mag() const { return std::max(std::fabs(lo_), std::fabs(hi_)); }
  /// min |x| over the interval.
  double mig() const { return (lo_ <= 0 && hi_ >= 0) ? 0.0 : std::min(std::fabs(lo_), std::fabs(hi_)); }
  bool contains(double v) const { return lo_ <= v && v <= hi_; }

  static double down(double x) { return -up(-x); }
  static double up(double x) {
    if (!(x < std::numeric_limits<double>::infinity())) return x;
    if (x == 0) return std::numeric_limits<double>::denorm_min();
    auto u = std::bit_cast<std::uint64_t>(x);
    u = x > 0 ? u + 1 : u - 1;
    return std::bit_cast<double>(u);
  }

  friend Interval operator+(const Interval& a, const Interval& b) {
    return {down(a.lo_ + b.lo_), up(a.hi_ + b.hi_)};
  }
  friend Interval operator-(const Interval& a, const Interval& b) {
    return {down(a.lo_ - b.hi_), up(a.hi_ - b.lo_)};
  }
  friend Interval operator-(const Interval& a) { return {-a.hi_, -a.lo_}; }
  friend Interval operator*(const Interval& a, const Interval& b) {
    const double p1 = a.lo_ * b.lo_, p2 = a.lo_ * b.hi_, p3 = a.hi_ * b.lo_, p4 = a.hi_ * b.hi_;
    return {down(std::min({p1, p2, p3, p4})), up(std::max({p1, p2, p3, p4}))};
  }
  friend Interval operator/(const Interval& a, const Interval& b) {
    if (b.lo_ <= 0 && b.hi_ >= 0) return whole();
    const double q1 = a.lo_ / b.lo_, q2 = a.lo_ / b.hi_, q3 = a.hi_ / b.lo_, q4 = a.hi_ / b.hi_;
    return {down(std::min({q1, q2, q3, q4})), up(std::max({q1, q2, q3, q4}))};
  }
  Interval& operator+=(const Interval& o) { return *this = *this + o; }
  Interval& operator-=(const Interval& o) { return *this = *this - o; }
  Interval& operator*=(const Interval& o) { return *this = *this * o; }

 private:
  double lo_ = 0.0;
  double hi_ = 0.0;
};

inline Interval sqr(const Interval& a) {
  const double m = a.mig();
  const double M = a.mag();
  return {Interval::down(m * m), Interval::up(M * M)};
}

inline Interval pow(const Interval& a, int e) {
  if (e == 0) return Interval(1.0);
  if (e % 2 == 0) {
    Interval h = pow(a, e / 2);
    return sqr(h);
  }
  return a * pow(a, e - 1);
}

inline Interval sqrt(const Interval& a) {
  const double lo = std::max(0.0, a.lo());
  return {lo > 0 ? Interval::down(std::sqrt(lo)) : 0.0, Interval::up(std::sqrt(std::max(0.0, a.hi())))};
}

inline Interval intersect(const Interval& a, const Interval& b) {
  return {std::max(a.lo(), b.lo()), std::min(a.hi(), b.hi())};
}

// Assumed absolute accuracy of the C library's sin/cos on [-1, 1] outputs.
inline constexpr double kTrigLibError = 0x1p-50;

/// cos over an interval by midpoint-radius: |cos'| <= 1.
inline Interval cos(const Interval& t) {
  const double m = t.mid();
  const double r = Interval::up(t.rad() + kTrigLibError);
  const double c = std::cos(m);
  return intersect({Interval::down(c - r), Interval::up(c + r)}, {-1.0, 1.0});
}

inline Interval sin(const Interval& t) {
  const double m = t.mid();
  const double r = Interval::up(t.rad() + kTrigLibError);
  const double s = std::sin(m);
  return intersect({Interval::down(s - r), Interval::up(s + r)}, {-1.0, 1.0});
}

/// {sin t, cos t} with one library call.
inline std::pair<Interval, Interval> sin_cos(const Interval& t) {
  const double m = t.mid();
  const double r = Interval::up(t.rad() + kTrigLibError);
  double s, c;
  ::sincos(m, &s, &c);
  return {intersect({Interval::down(s - r), Interval::up(s + r)}, {-1.0, 1.0}),
          intersect({Interval::down(c - r), Interval::up(c + r)}, {-1.0, 1.0})};
}

}  // namespace dq
