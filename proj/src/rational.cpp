#include "deformq/rational.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace dq {

Rational make_rational(long num, long den) {
  if (den == 0) throw ValidationError("rational with zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

Rational parse_rational(std::string_view text) {
  auto valid_int = [](std::string_view s) {
    if (s.empty()) return false;
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) return false;
    return std::all_of(s.begin() + static_cast<long>(i), s.end(),
                       [](char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; });
  };
  const auto slash = text.find('/');
  const std::string_view num = text.substr(0, slash);
  const std::string_view den = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
  if (!valid_int(num) || !valid_int(den) || den[0] == '-' || den[0] == '+') {
    throw ValidationError("malformed rational \"" + std::string(text) + "\" (expected p/q)");
  }
  auto strip = [](std::string_view s) { return std::string(s[0] == '+' ? s.substr(1) : s); };
  mpz_class n(strip(num), 10);
  mpz_class d(strip(den), 10);
  if (d == 0) throw ValidationError("rational with zero denominator: \"" + std::string(text) + "\"");
  Rational q(n, d);
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rational abs(const Rational& q) { return sgn(q) < 0 ? Rational(-q) : q; }

Rational pow(const Rational& q, unsigned e) {
  mpz_class n, d;
  mpz_pow_ui(n.get_mpz_t(), q.get_num_mpz_t(), e);
  mpz_pow_ui(d.get_mpz_t(), q.get_den_mpz_t(), e);
  return Rational(n, d);
}

Rational pow2(long e) {
  Rational r(1);
  if (e >= 0) {
    mpq_mul_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<unsigned long>(e));
  } else {
    mpq_div_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<unsigned long>(-e));
  }
  return r;
}

Rational from_double(double x) {
  if (!std::isfinite(x)) throw std::overflow_error("non-finite value in rational conversion");
  Rational q;
  mpq_set_d(q.get_mpq_t(), x);
  return q;
}

ComplexRational& ComplexRational::operator+=(const ComplexRational& o) {
  re += o.re;
  im += o.im;
  return *this;
}

ComplexRational& ComplexRational::operator-=(const ComplexRational& o) {
  re -= o.re;
  im -= o.im;
  return *this;
}

ComplexRational& ComplexRational::operator*=(const ComplexRational& o) {
  Rational r = re * o.re - im * o.im;
  Rational i = re * o.im + im * o.re;
  re = std::move(r);
  im = std::move(i);
  return *this;
}

Enclosure::Enclosure(Rational l, Rational h) : lo(std::move(l)), hi(std::move(h)) {
  if (lo > hi) throw std::logic_error("enclosure with lo > hi");
}

double Enclosure::mid_double() const {
  Rational m = (lo + hi) / 2;
  return m.get_d();
}

Enclosure hull_max(const Enclosure& a, const Enclosure& b) {
  return {std::max(a.lo, b.lo), std::max(a.hi, b.hi)};
}

Enclosure mul_nonneg(const Enclosure& a, const Enclosure& b) {
  return {std::max(Rational(0), a.lo) * std::max(Rational(0), b.lo), a.hi * b.hi};
}

Enclosure scale_nonneg(const Enclosure& a, const Rational& s) { return {a.lo * s, a.hi * s}; }

Enclosure sqrt_enclosure(const Rational& v, const Rational& tol) {
  if (sgn(v) < 0) throw std::domain_error("sqrt of negative rational");
  if (sgn(v) == 0) return Enclosure::point(0);
  if (mpz_perfect_square_p(v.get_num_mpz_t()) != 0 && mpz_perfect_square_p(v.get_den_mpz_t()) != 0) {
    mpz_class n, d;
    mpz_sqrt(n.get_mpz_t(), v.get_num_mpz_t());
    mpz_sqrt(d.get_mpz_t(), v.get_den_mpz_t());
    return Enclosure::point(Rational(n, d));
  }
  // Bisection on [0, max(1, v)], seeded from the double square root.
  Rational lo(0);
  Rational hi = v > 1 ? v : Rational(1);
  const double guess = std::sqrt(v.get_d());
  if (std::isfinite(guess) && guess > 0) {
    Rational g = from_double(guess);
    Rational step = from_double(std::max(guess * 1e-15, 1e-300));
    Rational gl = g - step;
    Rational gh = g + step;
    if (sgn(gl) > 0 && gl * gl <= v) lo = gl;
    if (gh * gh >= v) hi = gh;
  }
  while (hi - lo > tol) {
    Rational mid = (lo + hi) / 2;
    if (mid * mid <= v) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return {lo, hi};
}

const Enclosure& pi_enclosure() {
  static const Enclosure pi{parse_rational("3141592653589793238462643383279/1000000000000000000000000000000"),
                            parse_rational("3141592653589793238462643383280/1000000000000000000000000000000")};
  return pi;
}

int total_degree(const Exponent& e) {
  int s = 0;
  for (int v : e) s += v;
  return s;
}

namespace {

void fill_indices(int dim, int pos, int remaining, Exponent& cur, std::vector<Exponent>& out) {
  if (pos == dim - 1) {
    cur[static_cast<std::size_t>(pos)] = remaining;
    out.push_back(cur);
    return;
  }
  for (int v = remaining; v >= 0; --v) {
    cur[static_cast<std::size_t>(pos)] = v;
    fill_indices(dim, pos + 1, remaining - v, cur, out);
  }
}

}  // namespace

std::vector<Exponent> multi_indices_of(int dim, int order) {
  std::vector<Exponent> out;
  if (dim <= 0 || order < 0) return out;
  Exponent cur(static_cast<std::size_t>(dim), 0);
  fill_indices(dim, 0, order, cur, out);
  return out;
}

std::vector<Exponent> multi_indices_up_to(int dim, int order) {
  std::vector<Exponent> out;
  for (int k = 0; k <= order; ++k) {
    auto level = multi_indices_of(dim, k);
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

Box::Box(std::vector<Rational> l, std::vector<Rational> h) : lo(std::move(l)), hi(std::move(h)) {
  if (lo.size() != hi.size()) throw DimensionMismatch("box lo/hi lengths differ");
  if (lo.empty()) throw ValidationError("box must have positive dimension");
  for (std::size_t i = 0; i < lo.size(); ++i) {
    if (lo[i] > hi[i]) throw ValidationError("box has lo > hi in coordinate " + std::to_string(i));
  }
}

Box Box::cube(int dim, const Rational& l, const Rational& h) {
  return Box(std::vector<Rational>(static_cast<std::size_t>(dim), l),
             std::vector<Rational>(static_cast<std::size_t>(dim), h));
}

bool Box::contains(const std::vector<Rational>& x) const {
  if (x.size() != lo.size()) return false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] < lo[i] || x[i] > hi[i]) return false;
  }
  return true;
}

}  // namespace dq
