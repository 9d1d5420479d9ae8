#include "deformq/coeffring.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>

namespace dq {

Interval to_interval(const Rational& q) {
  const double d = q.get_d();
  if (Rational(d) == q) return Interval(d);
  return {Interval::down(d), Interval::up(d)};
}

namespace {

void check_dim(int a, int b) {
  if (a != b) throw DimensionMismatch("dimension mismatch: " + std::to_string(a) + " vs " + std::to_string(b));
}

void check_index(int i, int dim) {
  if (i < 0 || i >= dim) {
    throw ValidationError("coordinate index " + std::to_string(i) + " out of range for dim " + std::to_string(dim));
  }
}

}  // namespace

Interval abs_complex(const Interval& re, const Interval& im) {
  if (im.lo() == 0 && im.hi() == 0) return {re.mig(), re.mag()};
  return sqrt(sqr(re) + sqr(im));
}

// ---------------------------------------------------------------- PolyRep

PolyRep::PolyRep(int dim) : dim_(dim) {
  if (dim <= 0) throw ValidationError("dimension must be positive");
}

PolyRep PolyRep::constant(int dim, const Rational& c) {
  PolyRep p(dim);
  p.add_term(Exponent(static_cast<std::size_t>(dim), 0), c);
  return p;
}

PolyRep PolyRep::coordinate(int dim, int i) {
  check_index(i, dim);
  Exponent e(static_cast<std::size_t>(dim), 0);
  e[static_cast<std::size_t>(i)] = 1;
  return monomial(std::move(e), Rational(1));
}

PolyRep PolyRep::monomial(Exponent e, const Rational& c) {
  PolyRep p(static_cast<int>(e.size()));
  p.add_term(e, c);
  return p;
}

bool PolyRep::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && total_degree(terms_.begin()->first) == 0);
}

Rational PolyRep::constant_term() const {
  auto it = terms_.find(Exponent(static_cast<std::size_t>(dim_), 0));
  return it == terms_.end() ? Rational(0) : it->second;
}

int PolyRep::degree() const {
  int d = -1;
  for (const auto& [e, c] : terms_) d = std::max(d, total_degree(e));
  return d;
}

void PolyRep::add_term(const Exponent& e, const Rational& c) {
  if (static_cast<int>(e.size()) != dim_) throw DimensionMismatch("exponent length differs from dim");
  for (int v : e) {
    if (v < 0) throw ValidationError("negative exponent in polynomial term");
  }
  if (sgn(c) == 0) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (sgn(it->second) == 0) terms_.erase(it);
  }
}

PolyRep& PolyRep::operator+=(const PolyRep& o) {
  check_dim(dim_, o.dim_);
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

PolyRep& PolyRep::operator-=(const PolyRep& o) {
  check_dim(dim_, o.dim_);
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

PolyRep& PolyRep::operator*=(const Rational& s) {
  if (sgn(s) == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, c] : terms_) c *= s;
  return *this;
}

PolyRep operator*(const PolyRep& a, const PolyRep& b) {
  check_dim(a.dim_, b.dim_);
  PolyRep r(a.dim_);
  Exponent e(static_cast<std::size_t>(a.dim_));
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      r.add_term(e, ca * cb);
    }
  }
  return r;
}

PolyRep PolyRep::derivative(int i) const {
  check_index(i, dim_);
  PolyRep r(dim_);
  const auto u = static_cast<std::size_t>(i);
  for (const auto& [e, c] : terms_) {
    if (e[u] == 0) continue;
    Exponent d = e;
    d[u] -= 1;
    r.terms_.emplace(std::move(d), c * e[u]);
  }
  return r;
}

PolyRep PolyRep::derivative(const Exponent& multi) const {
  if (static_cast<int>(multi.size()) != dim_) throw DimensionMismatch("multi-index length differs from dim");
  PolyRep r(dim_);
  for (const auto& [e, c] : terms_) {
    Exponent d = e;
    Rational f = c;
    bool zero = false;
    for (std::size_t i = 0; i < e.size() && !zero; ++i) {
      if (multi[i] > e[i]) {
        zero = true;
        break;
      }
      for (int j = 0; j < multi[i]; ++j) f *= e[i] - j;
      d[i] -= multi[i];
    }
    if (!zero) r.add_term(d, f);
  }
  return r;
}

Rational PolyRep::evaluate(std::span<const Rational> x) const {
  if (static_cast<int>(x.size()) != dim_) throw DimensionMismatch("point length differs from dim");
  Rational s(0);
  for (const auto& [e, c] : terms_) {
    Rational m = c;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] > 0) m *= pow(x[i], static_cast<unsigned>(e[i]));
    }
    s += m;
  }
  return s;
}

Interval PolyRep::evaluate(std::span<const Interval> x) const {
  if (static_cast<int>(x.size()) != dim_) throw DimensionMismatch("point length differs from dim");
  Interval s(0.0);
  for (const auto& [e, c] : terms_) {
    Interval m = to_interval(c);
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] > 0) m *= dq::pow(x[i], e[i]);
    }
    s += m;
  }
  return s;
}

// ---------------------------------------------------------------- TrigRep

TrigRep::TrigRep(int dim) : dim_(dim) {
  if (dim <= 0) throw ValidationError("dimension must be positive");
}

TrigRep TrigRep::mode(Exponent k, const ComplexRational& c) {
  TrigRep t(static_cast<int>(k.size()));
  t.add_mode(k, c);
  return t;
}

TrigRep TrigRep::constant(int dim, const ComplexRational& c) {
  return mode(Exponent(static_cast<std::size_t>(dim), 0), c);
}

TrigRep TrigRep::sine(Exponent k) {
  // sin t = (e^{it} - e^{-it}) / 2i
  Exponent neg = k;
  for (int& v : neg) v = -v;
  TrigRep t(static_cast<int>(k.size()));
  t.add_mode(k, ComplexRational(0, make_rational(-1, 2)));
  t.add_mode(neg, ComplexRational(0, make_rational(1, 2)));
  return t;
}

TrigRep TrigRep::cosine(Exponent k) {
  Exponent neg = k;
  for (int& v : neg) v = -v;
  TrigRep t(static_cast<int>(k.size()));
  t.add_mode(k, ComplexRational(make_rational(1, 2)));
  t.add_mode(neg, ComplexRational(make_rational(1, 2)));
  return t;
}

bool TrigRep::is_constant() const {
  return modes_.empty() || (modes_.size() == 1 && std::all_of(modes_.begin()->first.begin(),
                                                              modes_.begin()->first.end(),
                                                              [](int v) { return v == 0; }));
}

ComplexRational TrigRep::zero_mode() const {
  auto it = modes_.find(Exponent(static_cast<std::size_t>(dim_), 0));
  return it == modes_.end() ? ComplexRational() : it->second;
}

bool TrigRep::is_real_valued() const {
  for (const auto& [k, c] : modes_) {
    Exponent neg = k;
    for (int& v : neg) v = -v;
    auto it = modes_.find(neg);
    const ComplexRational partner = it == modes_.end() ? ComplexRational() : it->second;
    if (!(partner == c.conj())) return false;
  }
  return true;
}

void TrigRep::add_mode(const Exponent& k, const ComplexRational& c) {
  if (static_cast<int>(k.size()) != dim_) throw DimensionMismatch("frequency length differs from dim");
  if (c.is_zero()) return;
  auto [it, inserted] = modes_.try_emplace(k, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) modes_.erase(it);
  }
}

TrigRep& TrigRep::operator+=(const TrigRep& o) {
  check_dim(dim_, o.dim_);
  for (const auto& [k, c] : o.modes_) add_mode(k, c);
  return *this;
}

TrigRep& TrigRep::operator-=(const TrigRep& o) {
  check_dim(dim_, o.dim_);
  for (const auto& [k, c] : o.modes_) add_mode(k, -c);
  return *this;
}

TrigRep& TrigRep::operator*=(const ComplexRational& s) {
  if (s.is_zero()) {
    modes_.clear();
    return *this;
  }
  for (auto& [k, c] : modes_) c *= s;
  return *this;
}

TrigRep operator*(const TrigRep& a, const TrigRep& b) {
  check_dim(a.dim_, b.dim_);
  TrigRep r(a.dim_);
  Exponent k(static_cast<std::size_t>(a.dim_));
  for (const auto& [ka, ca] : a.modes_) {
    for (const auto& [kb, cb] : b.modes_) {
      for (std::size_t i = 0; i < k.size(); ++i) k[i] = ka[i] + kb[i];
      r.add_mode(k, ca * cb);
    }
  }
  return r;
}

TrigRep TrigRep::derivative(int i) const {
  check_index(i, dim_);
  TrigRep r(dim_);
  const auto u = static_cast<std::size_t>(i);
  for (const auto& [k, c] : modes_) {
    if (k[u] == 0) continue;
    // (re + i im) * i k = -im k + i re k
    r.modes_.emplace(k, ComplexRational(-c.im * k[u], c.re * k[u]));
  }
  return r;
}

TrigRep TrigRep::derivative(const Exponent& multi) const {
  if (static_cast<int>(multi.size()) != dim_) throw DimensionMismatch("multi-index length differs from dim");
  TrigRep r = *this;
  for (int i = 0; i < dim_; ++i) {
    for (int j = 0; j < multi[static_cast<std::size_t>(i)]; ++j) r = r.derivative(i);
  }
  return r;
}

std::pair<Interval, Interval> TrigRep::evaluate(std::span<const Interval> x) const {
  if (static_cast<int>(x.size()) != dim_) throw DimensionMismatch("point length differs from dim");
  Interval re(0.0), im(0.0);
  for (const auto& [k, c] : modes_) {
    Interval t(0.0);
    for (std::size_t i = 0; i < k.size(); ++i) {
      if (k[i] != 0) t += Interval(static_cast<double>(k[i])) * x[i];
    }
    const Interval cs = cos(t), sn = sin(t);
    const Interval cr = to_interval(c.re), ci = to_interval(c.im);
    re += cr * cs - ci * sn;
    im += cr * sn + ci * cs;
  }
  return {re, im};
}

// ---------------------------------------------------------------- SmoothRep

SmoothRep SmoothRep::sum(PolyRep p, TrigRep t) {
  check_dim(p.dim(), t.dim());
  SmoothRep s(SumRep{std::move(p), std::move(t)});
  s.normalize();
  return s;
}

void SmoothRep::normalize() {
  if (!is_sum()) return;
  auto& s = std::get<SumRep>(rep_);
  const int d = s.poly.dim();
  const Rational pc = s.poly.constant_term();
  if (sgn(pc) != 0) {
    s.poly.add_term(Exponent(static_cast<std::size_t>(d), 0), -pc);
    s.trig.add_mode(Exponent(static_cast<std::size_t>(d), 0), ComplexRational(pc));
  }
  if (s.poly.is_zero()) {
    TrigRep t = std::move(s.trig);
    rep_ = std::move(t);
    return;
  }
  if (s.trig.is_constant() && s.trig.zero_mode().is_real()) {
    const Rational c = s.trig.zero_mode().re;
    PolyRep p = std::move(s.poly);
    p.add_term(Exponent(static_cast<std::size_t>(d), 0), c);
    rep_ = std::move(p);
  }
}

int SmoothRep::dim() const {
  return std::visit(
      [](const auto& r) {
        if constexpr (std::is_same_v<std::decay_t<decltype(r)>, SumRep>) {
          return r.poly.dim();
        } else {
          return r.dim();
        }
      },
      rep_);
}

PolyRep SmoothRep::poly_part() const {
  if (is_poly()) return poly();
  if (is_sum()) return std::get<SumRep>(rep_).poly;
  return PolyRep(dim());
}

TrigRep SmoothRep::trig_part() const {
  if (is_trig()) return trig();
  if (is_sum()) return std::get<SumRep>(rep_).trig;
  return TrigRep(dim());
}

bool SmoothRep::is_zero() const {
  if (is_poly()) return poly().is_zero();
  if (is_trig()) return trig().is_zero();
  return false;
}

std::optional<ComplexRational> SmoothRep::constant_value() const {
  if (is_poly() && poly().is_constant()) return ComplexRational(poly().constant_term());
  if (is_trig() && trig().is_constant()) return trig().zero_mode();
  return std::nullopt;
}

int SmoothRep::poly_degree() const {
  if (is_zero()) return -1;
  if (is_trig()) return 0;
  return poly_part().degree();
}

SmoothRep& SmoothRep::operator+=(const SmoothRep& o) {
  check_dim(dim(), o.dim());
  if (is_poly() && o.is_poly()) {
    std::get<PolyRep>(rep_) += o.poly();
    return *this;
  }
  if (is_trig() && o.is_trig()) {
    std::get<TrigRep>(rep_) += o.trig();
    return *this;
  }
  PolyRep p = poly_part();
  TrigRep t = trig_part();
  p += o.poly_part();
  t += o.trig_part();
  *this = sum(std::move(p), std::move(t));
  return *this;
}

SmoothRep& SmoothRep::operator-=(const SmoothRep& o) { return *this += o.scaled(Rational(-1)); }

SmoothRep SmoothRep::scaled(const Rational& s) const {
  if (is_poly()) return poly() * s;
  if (is_trig()) return trig() * ComplexRational(s);
  return sum(poly_part() * s, trig_part() * ComplexRational(s));
}

SmoothRep SmoothRep::scaled(const ComplexRational& s) const {
  if (s.is_real()) return scaled(s.re);
  const PolyRep p = poly_part();
  if (p.is_zero()) return trig_part() * s;
  if (p.is_constant()) {
    return sum(PolyRep(dim()), TrigRep::constant(dim(), s * ComplexRational(p.constant_term())) + trig_part() * s);
  }
  throw UnrepresentableProduct("complex multiple of a non-constant polynomial is not representable");
}

namespace {

// P * T for a polynomial and a trig polynomial; exact only when one side is constant.
SmoothRep cross_product(const PolyRep& p, const TrigRep& t) {
  if (p.is_zero() || t.is_zero()) return SmoothRep(p.dim());
  if (p.is_constant()) return t * ComplexRational(p.constant_term());
  if (t.is_constant()) return SmoothRep(p).scaled(t.zero_mode());
  throw UnrepresentableProduct("product of a non-constant polynomial and a non-constant trig polynomial");
}

}  // namespace

SmoothRep operator*(const SmoothRep& a, const SmoothRep& b) {
  check_dim(a.dim(), b.dim());
  if (a.is_poly() && b.is_poly()) return a.poly() * b.poly();
  if (a.is_trig() && b.is_trig()) return a.trig() * b.trig();
  const PolyRep pa = a.poly_part(), pb = b.poly_part();
  const TrigRep ta = a.trig_part(), tb = b.trig_part();
  SmoothRep r(pa * pb);
  r += SmoothRep(ta * tb);
  r += cross_product(pa, tb);
  r += cross_product(pb, ta);
  return r;
}

bool operator==(const SmoothRep& a, const SmoothRep& b) {
  if (a.dim() != b.dim()) return false;
  return (a - b).is_zero();
}

SmoothRep SmoothRep::derivative(int i) const {
  check_index(i, dim());
  if (is_poly()) return poly().derivative(i);
  if (is_trig()) return trig().derivative(i);
  return sum(poly_part().derivative(i), trig_part().derivative(i));
}

SmoothRep SmoothRep::derivative(const Exponent& multi) const {
  if (is_poly()) return poly().derivative(multi);
  if (is_trig()) return trig().derivative(multi);
  return sum(poly_part().derivative(multi), trig_part().derivative(multi));
}

std::pair<Interval, Interval> SmoothRep::evaluate(std::span<const Interval> x) const {
  if (is_poly()) return {poly().evaluate(x), Interval(0.0)};
  if (is_trig()) return trig().evaluate(x);
  auto [re, im] = trig_part().evaluate(x);
  return {re + poly_part().evaluate(x), im};
}

Interval SmoothRep::abs_value(std::span<const Interval> x) const {
  auto [re, im] = evaluate(x);
  return abs_complex(re, im);
}

SmoothRep ring_arith(const SmoothRep& a, const SmoothRep& b, RingOp op, const Rational& lambda) {
  switch (op) {
    case RingOp::add:
      return a + b;
    case RingOp::mul:
      return a * b;
    case RingOp::scale:
      return a.scaled(lambda);
  }
  throw ValidationError("unknown ring operation");
}

SmoothRep partial_derivative(const SmoothRep& f, int i) { return f.derivative(i); }

// ---------------------------------------------------------------- evaluation

namespace {

struct MpfrVar {
  mpfr_t v;
  explicit MpfrVar(mpfr_prec_t p) { mpfr_init2(v, p); }
  ~MpfrVar() { mpfr_clear(v); }
  MpfrVar(const MpfrVar&) = delete;
  MpfrVar& operator=(const MpfrVar&) = delete;
};

Rational mpfr_to_rational(const mpfr_t x) {
  Rational q;
  mpfr_get_q(q.get_mpq_t(), x);
  return q;
}

// Real and imaginary parts of a trig polynomial at an exact point, with
// a certified radius for each.
Value evaluate_trig(const TrigRep& t, std::span<const Rational> x, const Rational& tol) {
  std::vector<std::pair<Rational, const ComplexRational*>> phases;
  Rational weight(0);
  Rational max_theta(0);
  for (const auto& [k, c] : t.modes()) {
    Rational theta(0);
    for (std::size_t i = 0; i < k.size(); ++i) {
      if (k[i] != 0) theta += x[i] * k[i];
    }
    max_theta = std::max(max_theta, abs(theta));
    weight += abs(c.re) + abs(c.im);
    phases.emplace_back(std::move(theta), &c);
  }
  for (mpfr_prec_t prec = 64;; prec *= 2) {
    MpfrVar th(prec), s(prec), co(prec);
    Rational re(0), im(0);
    for (const auto& [theta, c] : phases) {
      mpfr_set_q(th.v, theta.get_mpq_t(), MPFR_RNDN);
      mpfr_sin_cos(s.v, co.v, th.v, MPFR_RNDN);
      const Rational cq = mpfr_to_rational(co.v);
      const Rational sq = mpfr_to_rational(s.v);
      re += c->re * cq - c->im * sq;
      im += c->re * sq + c->im * cq;
    }
    // Each of sin, cos is within (|theta| + 1) * 2^{1-p} of the exact value.
    const Rational rad = weight * (max_theta + 1) * pow2(1 - static_cast<long>(prec));
    if (2 * rad <= tol || prec > (1 << 20)) {
      return {Enclosure(re - rad, re + rad), Enclosure(im - rad, im + rad)};
    }
  }
}

}  // namespace

Value evaluate(const SmoothRep& f, std::span<const Rational> x, const Rational& tol) {
  if (static_cast<int>(x.size()) != f.dim()) throw DimensionMismatch("point length differs from dim");
  if (sgn(tol) <= 0) throw ValidationError("tolerance must be positive");
  const PolyRep p = f.poly_part();
  const TrigRep t = f.trig_part();
  const Rational pv = p.evaluate(x);
  if (t.is_zero()) return Value::exact_real(pv);
  if (t.is_constant()) {
    const ComplexRational c = t.zero_mode();
    return {Enclosure::point(pv + c.re), Enclosure::point(c.im)};
  }
  Value v = evaluate_trig(t, x, tol);
  v.re = Enclosure(v.re.lo + pv, v.re.hi + pv);
  return v;
}

std::map<Exponent, Value> jet(const SmoothRep& f, std::span<const Rational> x0, int m, const Rational& tol) {
  if (m < 0) throw ValidationError("jet order must be non-negative");
  std::map<Exponent, Value> out;
  for (const auto& idx : multi_indices_up_to(f.dim(), m)) out.emplace(idx, evaluate(f.derivative(idx), x0, tol));
  return out;
}

// ---------------------------------------------------------------- suprema

namespace detail {

namespace {

struct Cell {
  std::vector<Interval> box;
  double ub;
  std::vector<double> lip;
};

struct CellOrder {
  bool operator()(const Cell& a, const Cell& b) const { return a.ub < b.ub; }
};

}  // namespace

Enclosure branch_and_bound_sup(const SupProblem& problem, const Box& box, const Rational& tol,
                               const SupBudget& budget) {
  if (sgn(tol) <= 0) throw ValidationError("tolerance must be positive");
  const int d = box.dim();
  const auto ud = static_cast<std::size_t>(d);
  std::vector<Interval> outer(ud);
  for (std::size_t i = 0; i < ud; ++i) outer[i] = {to_interval(box.lo[i]).lo(), to_interval(box.hi[i]).hi()};

  std::size_t evaluations = 0;
  auto charge = [&] {
    ++evaluations;
    if (evaluations > budget.max_evaluations) {
      throw BudgetExceeded("supremum tolerance not reached within " + std::to_string(budget.max_evaluations) +
                           " evaluations");
    }
    if (budget.deadline && (evaluations & 63U) == 0 && std::chrono::steady_clock::now() > *budget.deadline) {
      throw BudgetExceeded("supremum tolerance not reached before the deadline");
    }
  };

  double best_lo = 0.0;
  std::vector<double> point(ud);
  std::vector<Rational> qpoint(ud);
  auto consider_point = [&](const std::vector<double>& pt) -> Interval {
    const Interval v = problem.abs_at(pt);
    if (v.lo() > best_lo) {
      for (std::size_t i = 0; i < ud; ++i) qpoint[i] = Rational(pt[i]);
      if (box.contains(qpoint)) best_lo = v.lo();
    }
    return v;
  };

  auto make_cell = [&](std::vector<Interval> cb, double parent_ub) {
    charge();
    for (std::size_t i = 0; i < ud; ++i) point[i] = cb[i].mid();
    const Interval v = consider_point(point);
    std::vector<double> lip = problem.lipschitz(cb);
    double ub = v.hi();
    for (std::size_t i = 0; i < ud; ++i) ub = Interval::up(ub + Interval::up(lip[i] * cb[i].rad()));
    if (problem.cell_bound) ub = std::min(ub, problem.cell_bound(cb, point));
    ub = std::min(ub, parent_ub);
    return Cell{std::move(cb), ub, std::move(lip)};
  };

  int grid = std::max(1, problem.initial_grid);
  while (grid > 1 && std::pow(static_cast<double>(grid), d) > 4096.0) --grid;

  std::priority_queue<Cell, std::vector<Cell>, CellOrder> heap;
  std::vector<int> counter(ud, 0);
  const double inf = std::numeric_limits<double>::infinity();
  for (;;) {
    std::vector<Interval> cb(ud);
    for (std::size_t i = 0; i < ud; ++i) {
      const double lo = outer[i].lo(), hi = outer[i].hi();
      const double a = counter[i] == 0 ? lo : lo + (hi - lo) * counter[i] / grid;
      const double b = counter[i] == grid - 1 ? hi : lo + (hi - lo) * (counter[i] + 1) / grid;
      cb[i] = {std::min(a, b), std::max(a, b)};
    }
    heap.push(make_cell(std::move(cb), inf));
    std::size_t j = 0;
    while (j < ud && ++counter[j] == grid) counter[j++] = 0;
    if (j == ud) break;
  }
  // Corner samples catch maxima attained on the boundary.
  for (std::size_t mask = 0; mask < (std::size_t{1} << std::min<std::size_t>(ud, 12)); ++mask) {
    charge();
    for (std::size_t i = 0; i < ud; ++i) point[i] = (mask >> i & 1U) ? outer[i].hi() : outer[i].lo();
    consider_point(point);
  }

  const double tol_d = Interval::down(tol.get_d());
  while (!heap.empty()) {
    if (heap.top().ub <= best_lo) break;
    if (heap.top().ub - best_lo <= tol_d) break;
    Cell top = heap.top();
    heap.pop();
    std::size_t axis = 0;
    double score = -1.0;
    for (std::size_t i = 0; i < ud; ++i) {
      const double s = top.lip[i] * top.box[i].width();
      const double sc = std::isfinite(s) ? s : top.box[i].width() * 1e300;
      if (sc > score) {
        score = sc;
        axis = i;
      }
    }
    const double m = top.box[axis].mid();
    if (!(m > top.box[axis].lo() && m < top.box[axis].hi())) {
      throw BudgetExceeded("supremum tolerance not reachable at double resolution");
    }
    std::vector<Interval> left = top.box, right = top.box;
    left[axis] = {top.box[axis].lo(), m};
    right[axis] = {m, top.box[axis].hi()};
    for (auto* child : {&left, &right}) {
      Cell c = make_cell(std::move(*child), top.ub);
      if (c.ub > best_lo) heap.push(std::move(c));
    }
  }
  const double hi = heap.empty() ? best_lo : std::max(best_lo, heap.top().ub);
  Enclosure e{Rational(best_lo), Rational(hi)};
  if (e.width() > tol) throw BudgetExceeded("supremum enclosure wider than tolerance");
  return e;
}

}  // namespace detail

IntervalEvaluator::IntervalEvaluator(const SmoothRep& f) {
  const PolyRep p = f.poly_part();
  const TrigRep tr = f.trig_part();
  for (const auto& [e, c] : p.terms()) {
    Term t{to_interval(c), {}};
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] != 0) t.powers.emplace_back(i, e[i]);
    }
    terms_.push_back(std::move(t));
  }
  for (const auto& [k, c] : tr.modes()) {
    Mode m{to_interval(c.re), to_interval(c.im), {}};
    for (std::size_t i = 0; i < k.size(); ++i) {
      if (k[i] != 0) m.freq.emplace_back(i, static_cast<double>(k[i]));
    }
    modes_.push_back(std::move(m));
  }
}

std::pair<Interval, Interval> IntervalEvaluator::evaluate(std::span<const Interval> x) const {
  Interval re(0.0), im(0.0);
  for (const auto& t : terms_) {
    Interval v = t.c;
    for (const auto& [i, p] : t.powers) v *= dq::pow(x[i], p);
    re += v;
  }
  for (const auto& m : modes_) {
    Interval th(0.0);
    for (const auto& [i, k] : m.freq) th += Interval(k) * x[i];
    const auto [sn, cs] = sin_cos(th);
    re += m.re * cs - m.im * sn;
    im += m.re * sn + m.im * cs;
  }
  return {re, im};
}

Interval IntervalEvaluator::abs(std::span<const Interval> x) const {
  auto [re, im] = evaluate(x);
  return abs_complex(re, im);
}

namespace {

// f(x) = g(<v, x>) with v primitive: returns g and the range of <v, x> over the box.
std::optional<std::pair<TrigRep, Box>> along_single_direction(const TrigRep& f, const Box& box) {
  Exponent v;
  for (const auto& [k, c] : f.modes()) {
    if (std::all_of(k.begin(), k.end(), [](int e) { return e == 0; })) continue;
    int g = 0;
    for (int e : k) g = std::gcd(g, e);
    v = k;
    for (int& e : v) e /= g;
    break;
  }
  if (v.empty()) return std::nullopt;
  TrigRep g(1);
  for (const auto& [k, c] : f.modes()) {
    long m = 0;
    std::size_t pivot = 0;
    while (v[pivot] == 0) ++pivot;
    m = k[pivot] / v[pivot];
    for (std::size_t i = 0; i < k.size(); ++i) {
      if (static_cast<long>(k[i]) != m * v[i]) return std::nullopt;
    }
    g.add_mode({static_cast<int>(m)}, c);
  }
  Rational lo(0), hi(0);
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Rational a = box.lo[i] * v[i], b = box.hi[i] * v[i];
    lo += std::min(a, b);
    hi += std::max(a, b);
  }
  return std::make_pair(std::move(g), Box({lo}, {hi}));
}

}  // namespace

namespace detail {

namespace {

// Real parts of several derivatives of f over a box, sharing one sin/cos per mode.
class DerivativeJet {
 public:
  DerivativeJet(const SmoothRep& f, const std::vector<Exponent>& orders) {
    std::vector<TrigRep> trig;
    for (const auto& I : orders) {
      const SmoothRep g = f.derivative(I);
      PolyRep p = g.poly_part();
      poly_.push_back(p.is_zero() ? std::nullopt : std::optional<IntervalEvaluator>(SmoothRep(std::move(p))));
      trig.push_back(g.trig_part());
    }
    const TrigRep t = f.trig_part();
    for (const auto& [k, c] : t.modes()) {
      Mode m;
      for (std::size_t i = 0; i < k.size(); ++i) {
        if (k[i] != 0) m.freq.emplace_back(i, static_cast<double>(k[i]));
      }
      for (const auto& d : trig) {
        const auto it = d.modes().find(k);
        if (it == d.modes().end()) {
          m.coef.emplace_back(Interval(0.0), Interval(0.0));
        } else {
          m.coef.emplace_back(to_interval(it->second.re), to_interval(it->second.im));
        }
      }
      modes_.push_back(std::move(m));
    }
  }

  void evaluate(std::span<const Interval> x, std::vector<Interval>& out) const {
    out.assign(poly_.size(), Interval(0.0));
    for (std::size_t j = 0; j < poly_.size(); ++j) {
      if (poly_[j]) out[j] = poly_[j]->evaluate(x).first;
    }
    for (const auto& m : modes_) {
      Interval th(0.0);
      for (const auto& [i, k] : m.freq) th += Interval(k) * x[i];
      const auto [sn, cs] = sin_cos(th);
      for (std::size_t j = 0; j < out.size(); ++j) out[j] += m.coef[j].first * cs - m.coef[j].second * sn;
    }
  }

 private:
  struct Mode {
    std::vector<std::pair<std::size_t, double>> freq;
    std::vector<std::pair<Interval, Interval>> coef;
  };
  std::vector<std::optional<IntervalEvaluator>> poly_;
  std::vector<Mode> modes_;
};

// Third-order Taylor model of a real function around a cell centre c:
// f(c + h) <= f(c) + g.h + h^T H h / 2 + R with R bounded by third derivatives
// over the cell. The quadratic part is maximized in closed form when its
// Hessian is certified definite.
class TaylorModel {
 public:
  explicit TaylorModel(const SmoothRep& f)
      : d_(static_cast<std::size_t>(f.dim())), point_(f, orders(f.dim(), 2)), cell_(f, orders(f.dim(), 3)) {
    for (std::size_t i = 0; i < d_; ++i) {
      for (std::size_t j = i; j < d_; ++j) {
        for (std::size_t k = j; k < d_; ++k) mult_.push_back(i == k ? 1.0 : (i == j || j == k) ? 3.0 : 6.0);
      }
    }
  }

  double bound(std::span<const Interval> cell, std::span<const double> c) const {
    std::vector<Interval> x(d_);
    std::vector<double> r(d_);
    for (std::size_t i = 0; i < d_; ++i) {
      x[i] = Interval(c[i]);
      r[i] = cell[i].rad();
    }
    std::vector<Interval> at, over;
    point_.evaluate(x, at);
    cell_.evaluate(cell, over);
    const Interval fv = at[0];
    std::vector<Interval> g(d_), ng(d_);
    Mat H(d_, std::vector<Interval>(d_)), nH(d_, std::vector<Interval>(d_));
    std::size_t h = 1 + d_, t = 0;
    Interval rem(0.0);
    for (std::size_t i = 0; i < d_; ++i) {
      g[i] = at[1 + i];
      ng[i] = -g[i];
      for (std::size_t j = i; j < d_; ++j, ++h) {
        H[i][j] = H[j][i] = at[h];
        nH[i][j] = nH[j][i] = -H[i][j];
        for (std::size_t k = j; k < d_; ++k, ++t) {
          rem += Interval(over[t].mag()) * Interval(mult_[t]) * Interval(r[i]) * Interval(r[j]) * Interval(r[k]);
        }
      }
    }
    rem = rem / Interval(6.0);
    const double up = (fv + Interval(quadratic_max(g, nH, r))).hi();
    const double down = (-fv + Interval(quadratic_max(ng, H, r))).hi();
    return (Interval(std::max(up, down)) + rem).hi();
  }

 private:
  using Mat = std::vector<std::vector<Interval>>;

  // Upper bound of g.h - h^T Q h / 2 over |h_i| <= r_i.
  double quadratic_max(const std::vector<Interval>& g, const Mat& Q, const std::vector<double>& r) const {
    Interval linear(0.0);
    for (std::size_t i = 0; i < d_; ++i) linear += Interval(g[i].mag()) * Interval(r[i]);
    if (!positive_definite(Q)) {
      Interval quad(0.0);
      for (std::size_t i = 0; i < d_; ++i) {
        for (std::size_t j = 0; j < d_; ++j) quad += Interval(Q[i][j].mag()) * Interval(r[i]) * Interval(r[j]);
      }
      return (linear + quad * Interval(0.5)).hi();
    }
    // For any y: g.h - h^T Q h / 2 <= y^T Q y / 2 + (g - Q y).h.
    const std::vector<double> y = solve_midpoint(g, Q);
    Interval yQy(0.0), resid(0.0);
    for (std::size_t i = 0; i < d_; ++i) {
      Interval qy(0.0);
      for (std::size_t j = 0; j < d_; ++j) qy += Q[i][j] * Interval(y[j]);
      yQy += Interval(y[i]) * qy;
      resid += Interval((g[i] - qy).mag()) * Interval(r[i]);
    }
    return std::min(linear.hi(), (yQy * Interval(0.5) + resid).hi());
  }

  bool positive_definite(Mat A) const {
    for (std::size_t k = 0; k < d_; ++k) {
      if (!(A[k][k].lo() > 0)) return false;
      for (std::size_t i = k + 1; i < d_; ++i) {
        const Interval m = A[i][k] / A[k][k];
        for (std::size_t j = k; j < d_; ++j) A[i][j] -= m * A[k][j];
      }
    }
    return true;
  }

  std::vector<double> solve_midpoint(const std::vector<Interval>& g, const Mat& Q) const {
    std::vector<std::vector<double>> A(d_, std::vector<double>(d_));
    std::vector<double> b(d_);
    for (std::size_t i = 0; i < d_; ++i) {
      b[i] = g[i].mid();
      for (std::size_t j = 0; j < d_; ++j) A[i][j] = Q[i][j].mid();
    }
    for (std::size_t k = 0; k < d_; ++k) {
      for (std::size_t i = k + 1; i < d_; ++i) {
        const double m = A[i][k] / A[k][k];
        for (std::size_t j = k; j < d_; ++j) A[i][j] -= m * A[k][j];
        b[i] -= m * b[k];
      }
    }
    std::vector<double> y(d_);
    for (std::size_t k = d_; k-- > 0;) {
      double s = b[k];
      for (std::size_t j = k + 1; j < d_; ++j) s -= A[k][j] * y[j];
      y[k] = s / A[k][k];
    }
    for (double& v : y) {
      if (!std::isfinite(v)) v = 0.0;
    }
    return y;
  }

  // Order 0, then i, then (i <= j), up to `top`, or only (i <= j <= k) when top is 3.
  static std::vector<Exponent> orders(int dim, int top) {
    std::vector<Exponent> out;
    const auto unit = [dim](std::initializer_list<int> idx) {
      Exponent e(static_cast<std::size_t>(dim), 0);
      for (int i : idx) ++e[static_cast<std::size_t>(i)];
      return e;
    };
    if (top == 3) {
      for (int i = 0; i < dim; ++i) {
        for (int j = i; j < dim; ++j) {
          for (int k = j; k < dim; ++k) out.push_back(unit({i, j, k}));
        }
      }
      return out;
    }
    out.push_back(unit({}));
    for (int i = 0; i < dim; ++i) out.push_back(unit({i}));
    for (int i = 0; i < dim; ++i) {
      for (int j = i; j < dim; ++j) out.push_back(unit({i, j}));
    }
    return out;
  }

  std::size_t d_;
  DerivativeJet point_, cell_;
  std::vector<double> mult_;
};

}  // namespace

}  // namespace detail

Enclosure sup_enclosure(const SmoothRep& f, const Box& box, const Rational& tol, const SupBudget& budget) {
  check_dim(f.dim(), box.dim());
  if (sgn(tol) <= 0) throw ValidationError("tolerance must be positive");
  if (f.is_zero()) return Enclosure::point(0);
  if (auto c = f.constant_value()) {
    if (c->is_real()) return Enclosure::point(abs(c->re));
    return sqrt_enclosure(c->norm2(), tol);
  }
  if (f.is_trig()) {
    // Integer frequencies: one period per axis already attains the supremum.
    const Rational period = 2 * pi_enclosure().hi;
    Box cut = box;
    bool changed = false;
    for (std::size_t i = 0; i < cut.lo.size(); ++i) {
      if (cut.hi[i] - cut.lo[i] > period) {
        cut.hi[i] = cut.lo[i] + period;
        changed = true;
      }
    }
    if (changed) return sup_enclosure(f, cut, tol, budget);
  }
  if (f.is_trig() && f.dim() > 1) {
    if (auto reduced = along_single_direction(f.trig(), box)) {
      return sup_enclosure(SmoothRep(reduced->first), reduced->second, tol, budget);
    }
  }
  const IntervalEvaluator fc(f);
  std::vector<Exponent> first;
  for (int i = 0; i < f.dim(); ++i) {
    first.emplace_back(static_cast<std::size_t>(f.dim()), 0);
    first.back()[static_cast<std::size_t>(i)] = 1;
  }
  const bool real = f.trig_part().is_real_valued();
  const detail::DerivativeJet grad_jet(f, first);
  std::vector<IntervalEvaluator> grad;
  if (!real) {
    for (int i = 0; i < f.dim(); ++i) grad.emplace_back(f.derivative(i));
  }
  detail::SupProblem problem;
  std::vector<Interval> scratch(static_cast<std::size_t>(f.dim()));
  problem.abs_at = [&](std::span<const double> x) {
    for (std::size_t i = 0; i < x.size(); ++i) scratch[i] = Interval(x[i]);
    return fc.abs(scratch);
  };
  problem.lipschitz = [&](std::span<const Interval> cell) {
    std::vector<double> l(static_cast<std::size_t>(f.dim()));
    if (real) {
      std::vector<Interval> d;
      grad_jet.evaluate(cell, d);
      for (std::size_t i = 0; i < l.size(); ++i) l[i] = d[i].mag();
    } else {
      for (std::size_t i = 0; i < l.size(); ++i) l[i] = grad[i].abs(cell).hi();
    }
    return l;
  };
  std::optional<detail::TaylorModel> taylor;
  if (real) {
    taylor.emplace(f);
    problem.cell_bound = [&](std::span<const Interval> cell, std::span<const double> c) { return taylor->bound(cell, c); };
  }
  return detail::branch_and_bound_sup(problem, box, tol, budget);
}

}  // namespace dq
