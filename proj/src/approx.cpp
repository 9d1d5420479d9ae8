#include "deformq/approx.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <sstream>

namespace dq {

namespace {

using Shape = std::vector<std::size_t>;

std::size_t volume(const Shape& s) {
  return std::accumulate(s.begin(), s.end(), std::size_t{1}, std::multiplies<>());
}

std::vector<std::size_t> strides(const Shape& s) {
  std::vector<std::size_t> st(s.size(), 1);
  for (std::size_t i = s.size(); i-- > 1;) st[i - 1] = st[i] * s[i];
  return st;
}

// Applies `fn` to every fiber along `axis` of a row-major array.
template <class Fn>
void for_each_fiber(const Shape& shape, std::size_t axis, Fn&& fn) {
  const auto st = strides(shape);
  const std::size_t n = volume(shape);
  for (std::size_t base = 0; base < n; ++base) {
    if ((base / st[axis]) % shape[axis] != 0) continue;
    fn(base, st[axis]);
  }
}

Rational falling(int n, int r) {
  Rational p(1);
  for (int j = 0; j < r; ++j) p *= n - j;
  return p;
}

mpz_class binomial(int n, int k) {
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return r;
}

Interval integer_interval(const mpz_class& z) {
  const double d = z.get_d();
  if (mpz_cmp_d(z.get_mpz_t(), d) == 0) return Interval(d);
  return {Interval::down(d), Interval::up(d)};
}

double up_double(const Rational& q) { return to_interval(q).hi(); }

// Bernstein basis b_{n,k}(t) over a window of significant k, normalized so
// the full basis sums to one; `tail` bounds the relative mass left out.
struct Window {
  std::size_t first = 0;
  std::vector<Interval> w;
  double tail = 0.0;
};

Window basis_window(int n, Interval t) {
  Window out;
  if (n == 0) {
    out.w = {Interval(1.0)};
    return out;
  }
  t = Interval(std::clamp(t.lo(), 0.0, 1.0), std::clamp(t.hi(), 0.0, 1.0));
  const bool flip = t.mid() > 0.5;
  const Interval u = flip ? Interval(1.0) - t : t;
  const Interval ul(std::max(0.0, u.lo()), std::min(1.0, u.hi()));
  if (ul.hi() == 0.0) {
    out.first = flip ? static_cast<std::size_t>(n) : 0;
    out.w = {Interval(1.0)};
    return out;
  }
  int k0 = ul.lo() <= 0.0 ? 0 : static_cast<int>(std::floor((n + 1) * ul.mid()));
  k0 = std::clamp(k0, 0, n);
  const Interval q = ul / (Interval(1.0) - ul);
  constexpr double tiny = 1e-20;

  std::vector<Interval> up_side;
  double tail = 0.0;
  Interval rho(1.0);
  for (int k = k0; k < n; ++k) {
    const Interval r = Interval(static_cast<double>(n - k)) / Interval(static_cast<double>(k + 1)) * q;
    rho = rho * r;
    up_side.push_back(rho);
    if (r.hi() < 0.5 && rho.hi() < tiny) {
      tail = Interval::up(rho.hi() * Interval::up(r.hi() / Interval::down(1.0 - r.hi())));
      break;
    }
  }
  std::vector<Interval> down_side;
  if (k0 > 0) {
    const Interval iq = (Interval(1.0) - ul) / ul;
    rho = Interval(1.0);
    for (int k = k0; k > 0; --k) {
      const Interval r = Interval(static_cast<double>(k)) / Interval(static_cast<double>(n - k + 1)) * iq;
      rho = rho * r;
      down_side.push_back(rho);
      if (r.hi() < 0.5 && rho.hi() < tiny) {
        tail = Interval::up(tail + Interval::up(rho.hi() * Interval::up(r.hi() / Interval::down(1.0 - r.hi()))));
        break;
      }
    }
  }
  std::vector<Interval> rhos(down_side.rbegin(), down_side.rend());
  rhos.emplace_back(1.0);
  rhos.insert(rhos.end(), up_side.begin(), up_side.end());
  Interval S(0.0);
  for (const auto& r : rhos) S += r;
  const Interval denom = S + Interval(0.0, tail);
  for (auto& r : rhos) r = r / denom;
  out.tail = Interval::up(tail / S.lo());
  const std::size_t lo_k = static_cast<std::size_t>(k0) - down_side.size();
  if (flip) {
    std::reverse(rhos.begin(), rhos.end());
    out.first = static_cast<std::size_t>(n) - (lo_k + rhos.size() - 1);
  } else {
    out.first = lo_k;
  }
  out.w = std::move(rhos);
  return out;
}

// Derivatives of the Bernstein polynomial in forward-difference form:
// d^I B = factor_I * sum_k (Delta^I s)_k * prod_i b_{nu_i - I_i, k_i}.
class BernsteinDerivatives {
 public:
  explicit BernsteinDerivatives(const BernsteinApprox& a) : a_(a) {
    for (int i = 0; i < a.dim(); ++i) {
      lo_.push_back(to_interval(a.box.lo[static_cast<std::size_t>(i)]));
      width_.push_back(to_interval(Rational(a.box.hi[static_cast<std::size_t>(i)] - a.box.lo[static_cast<std::size_t>(i)])));
    }
  }

  struct Table {
    bool zero = false;
    Shape shape;
    std::vector<mpz_class> diff;
    std::vector<Interval> values;
    double max_abs = 0.0;
  };

  const Table& table(const Exponent& I) {
    auto it = memo_.find(I);
    if (it != memo_.end()) return it->second;
    Table t;
    const auto d = static_cast<std::size_t>(a_.dim());
    for (std::size_t i = 0; i < d; ++i) {
      if (I[i] > a_.nu[i]) t.zero = true;
    }
    if (!t.zero) {
      if (total_degree(I) == 0) {
        for (std::size_t i = 0; i < d; ++i) t.shape.push_back(static_cast<std::size_t>(a_.nu[i]) + 1);
        t.diff = a_.numerators;
      } else {
        std::size_t axis = 0;
        while (I[axis] == 0) ++axis;
        Exponent parent = I;
        parent[axis] -= 1;
        const Table& p = table(parent);
        t.shape = p.shape;
        t.shape[axis] -= 1;
        const auto ps = strides(p.shape);
        const auto ts = strides(t.shape);
        t.diff.resize(volume(t.shape));
        std::vector<std::size_t> idx(d, 0);
        for (std::size_t flat = 0; flat < t.diff.size(); ++flat) {
          std::size_t rem = flat, src = 0;
          for (std::size_t i = 0; i < d; ++i) {
            idx[i] = rem / ts[i];
            rem %= ts[i];
            src += idx[i] * ps[i];
          }
          t.diff[flat] = p.diff[src + ps[axis]] - p.diff[src];
        }
      }
      Rational factor = a_.scale;
      for (std::size_t i = 0; i < d; ++i) {
        if (I[i] == 0) continue;
        factor *= falling(a_.nu[i], I[i]);
        factor /= pow(a_.box.hi[i] - a_.box.lo[i], static_cast<unsigned>(I[i]));
      }
      const Interval fi = to_interval(factor);
      t.values.reserve(t.diff.size());
      for (const auto& z : t.diff) {
        t.values.push_back(integer_interval(z) * fi);
        t.max_abs = std::max(t.max_abs, t.values.back().mag());
      }
    }
    return memo_.emplace(I, std::move(t)).first->second;
  }

  /// Convex-hull bound on sup |d^I B|.
  double coefficient_bound(const Exponent& I) {
    const Table& t = table(I);
    return t.zero ? 0.0 : t.max_abs;
  }

  Interval evaluate(const Exponent& I, std::span<const Interval> x) {
    const Table& t = table(I);
    if (t.zero) return Interval(0.0);
    const std::size_t d = t.shape.size();
    std::vector<Window> win(d);
    double tail = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      const int n = static_cast<int>(t.shape[i]) - 1;
      const Interval u = n == 0 ? Interval(0.0) : (x[i] - lo_[i]) / width_[i];
      win[i] = basis_window(n, u);
      tail = Interval::up(tail + win[i].tail);
    }
    const auto st = strides(t.shape);
    std::function<Interval(std::size_t, std::size_t)> contract = [&](std::size_t axis, std::size_t base) {
      Interval s(0.0);
      const Window& w = win[axis];
      for (std::size_t j = 0; j < w.w.size(); ++j) {
        const std::size_t at = base + (w.first + j) * st[axis];
        s += w.w[j] * (axis + 1 == d ? t.values[at] : contract(axis + 1, at));
      }
      return s;
    };
    const Interval v = contract(0, 0);
    const double e = Interval::up(t.max_abs * tail);
    return v + Interval(-e, e);
  }

 private:
  const BernsteinApprox& a_;
  std::vector<Interval> lo_, width_;
  std::map<Exponent, Table> memo_;
};

std::optional<std::map<Exponent, Enclosure>> certify(const SmoothRep& f, const BernsteinApprox& A, int order,
                                                     const Rational& tol, const SupBudget& budget,
                                                     const std::optional<Rational>& threshold) {
  const int d = A.dim();
  const auto ud = static_cast<std::size_t>(d);
  if (f.dim() != d) throw DimensionMismatch("function and box dimensions differ");
  if (!f.trig_part().is_real_valued()) throw ValidationError("Bernstein approximation needs a real-valued function");
  std::vector<int> active;
  for (int i = 0; i < d; ++i) {
    if (A.nu[static_cast<std::size_t>(i)] > 0 || !f.derivative(i).is_zero()) active.push_back(i);
  }
  BernsteinDerivatives B(A);
  std::vector<Interval> whole(ud);
  for (std::size_t i = 0; i < ud; ++i) whole[i] = {to_interval(A.box.lo[i]).lo(), to_interval(A.box.hi[i]).hi()};

  auto embed = [&](const Exponent& local) {
    Exponent I(ud, 0);
    for (std::size_t j = 0; j < active.size(); ++j) I[static_cast<std::size_t>(active[j])] = local[j];
    return I;
  };
  const int na = static_cast<int>(active.size());
  std::map<Exponent, Enclosure> e;
  auto lookup_hi = [&](const Exponent& I) -> double {
    auto it = e.find(I);
    return it == e.end() ? 0.0 : up_double(it->second.hi);
  };

  for (const auto& local : multi_indices_of(na, order + 1)) {
    const Exponent I = embed(local);
    const double fb = IntervalEvaluator(f.derivative(I)).abs(whole).hi();
    const double hi = Interval::up(fb + B.coefficient_bound(I));
    if (!std::isfinite(hi)) throw BudgetExceeded("derivative bound overflow in Bernstein certification");
    e[I] = Enclosure(Rational(0), from_double(hi));
  }
  for (int level = order; level >= 0; --level) {
    for (const auto& local : multi_indices_of(na, level)) {
      const Exponent I = embed(local);
      const IntervalEvaluator ef(f.derivative(I));
      std::vector<double> lip(ud, 0.0);
      for (int i : active) {
        Exponent J = I;
        J[static_cast<std::size_t>(i)] += 1;
        lip[static_cast<std::size_t>(i)] = lookup_hi(J);
      }
      std::vector<Interval> xi(ud);
      auto abs_at = [&](std::span<const double> pt) {
        for (std::size_t i = 0; i < ud; ++i) xi[i] = Interval(pt[i]);
        auto [re, im] = ef.evaluate(xi);
        return abs_complex(re - B.evaluate(I, xi), im);
      };
      if (threshold) {
        const double th = to_interval(*threshold).lo();
        const int per_axis = na == 0 ? 1 : std::max(2, static_cast<int>(std::pow(64.0, 1.0 / na)));
        std::vector<int> c(active.size(), 0);
        std::vector<double> pt(ud);
        for (std::size_t i = 0; i < ud; ++i) pt[i] = whole[i].mid();
        for (;;) {
          for (std::size_t j = 0; j < active.size(); ++j) {
            const auto ax = static_cast<std::size_t>(active[j]);
            pt[ax] = whole[ax].lo() + (whole[ax].hi() - whole[ax].lo()) * (c[j] + 0.5) / per_axis;
          }
          if (abs_at(pt).lo() >= th) return std::nullopt;
          std::size_t j = 0;
          while (j < c.size() && ++c[j] == per_axis) c[j++] = 0;
          if (j == c.size()) break;
        }
      }
      detail::SupProblem problem{abs_at, [&](std::span<const Interval>) { return lip; }, {}, 4};
      Enclosure s = detail::branch_and_bound_sup(problem, A.box, tol, budget);
      if (threshold && s.hi >= *threshold) return std::nullopt;
      e[I] = std::move(s);
    }
  }
  std::map<Exponent, Enclosure> out;
  for (const auto& I : multi_indices_up_to(d, order)) {
    auto it = e.find(I);
    out.emplace(I, it == e.end() ? Enclosure::point(0) : it->second);
  }
  return out;
}

// Suffix products of sorted coordinate words: x^a * G = x^a G + (hbar/2) w^{ab} d_b G.
class WordProducts {
 public:
  WordProducts(const SymplecticStructure& S, int N, bool via_moyal) : S_(S), N_(N), via_moyal_(via_moyal) {}

  const FormalFunction& get(const Exponent& counts) {
    auto it = memo_.find(counts);
    if (it != memo_.end()) return it->second;
    std::vector<int> word;
    for (std::size_t i = 0; i < counts.size(); ++i) word.insert(word.end(), static_cast<std::size_t>(counts[i]), static_cast<int>(i));
    Exponent suffix(counts.size(), 0);
    const FormalFunction* prev = &memo_.try_emplace(suffix, constant_series(SmoothRep::constant(S_.dim(), 1), N_)).first->second;
    for (std::size_t j = word.size(); j-- > 0;) {
      const int a = word[j];
      suffix[static_cast<std::size_t>(a)] += 1;
      auto found = memo_.find(suffix);
      if (found == memo_.end()) found = memo_.emplace(suffix, prepend(a, *prev)).first;
      prev = &found->second;
    }
    return *prev;
  }

 private:
  FormalFunction prepend(int a, const FormalFunction& G) const {
    const SmoothRep xa = PolyRep::coordinate(S_.dim(), a);
    if (via_moyal_) return moyal(constant_series(xa, N_), G, S_);
    FormalFunction h(N_, SmoothRep(S_.dim()));
    for (int m = 0; m <= N_; ++m) {
      SmoothRep v = xa * G[m];
      if (m > 0) {
        for (int b = 0; b < S_.dim(); ++b) {
          const Rational& w = S_.upper(a, b);
          if (sgn(w) != 0) v += G[m - 1].derivative(b).scaled(w / 2);
        }
      }
      h[m] = std::move(v);
    }
    return h;
  }

  const SymplecticStructure& S_;
  int N_;
  bool via_moyal_;
  std::map<Exponent, FormalFunction> memo_;
};

}  // namespace

PolyRep BernsteinApprox::to_poly() const {
  const auto d = static_cast<std::size_t>(dim());
  Shape shape;
  for (int v : nu) shape.push_back(static_cast<std::size_t>(v) + 1);
  std::vector<mpz_class> a = numerators;
  // Forward differences at the origin: a[J] = Delta^J s_0.
  for (std::size_t axis = 0; axis < d; ++axis) {
    const std::size_t n = shape[axis];
    if (n == 1) continue;
    for_each_fiber(shape, axis, [&](std::size_t base, std::size_t st) {
      for (std::size_t j = 1; j < n; ++j) {
        for (std::size_t k = n - 1; k >= j; --k) a[base + k * st] -= a[base + (k - 1) * st];
      }
    });
  }
  const auto st = strides(shape);
  std::vector<Rational> c(a.size());
  for (std::size_t flat = 0; flat < a.size(); ++flat) {
    if (a[flat] == 0) continue;
    mpz_class m = a[flat];
    std::size_t rem = flat;
    for (std::size_t i = 0; i < d; ++i) {
      const std::size_t j = rem / st[i];
      rem %= st[i];
      m *= binomial(nu[i], static_cast<int>(j));
    }
    c[flat] = Rational(m) * scale;
  }
  // t_i = (x_i - lo_i) / w_i: rescale, then Taylor shift by -lo_i.
  for (std::size_t axis = 0; axis < d; ++axis) {
    const std::size_t n = shape[axis];
    if (n == 1) continue;
    const Rational w = box.hi[axis] - box.lo[axis];
    const Rational& lo = box.lo[axis];
    if (w == 1 && sgn(lo) == 0) continue;
    for_each_fiber(shape, axis, [&](std::size_t base, std::size_t s) {
      Rational inv(1);
      for (std::size_t j = 0; j < n; ++j) {
        c[base + j * s] *= inv;
        inv /= w;
      }
      if (sgn(lo) == 0) return;
      const Rational shift = -lo;
      for (std::size_t i = 0; i + 1 < n; ++i) {
        for (std::size_t j = n - 1; j-- > i;) c[base + j * s] += shift * c[base + (j + 1) * s];
      }
    });
  }
  PolyRep p(dim());
  Exponent e(d, 0);
  for (std::size_t flat = 0; flat < c.size(); ++flat) {
    if (sgn(c[flat]) == 0) continue;
    std::size_t rem = flat;
    for (std::size_t i = 0; i < d; ++i) {
      e[i] = static_cast<int>(rem / st[i]);
      rem %= st[i];
    }
    p.add_term(e, c[flat]);
  }
  return p;
}

BernsteinApprox bernstein_samples(const SmoothRep& f, const std::vector<int>& nu, const Box& K, long precision_bits) {
  const int d = K.dim();
  const auto ud = static_cast<std::size_t>(d);
  if (f.dim() != d) throw DimensionMismatch("function and box dimensions differ");
  if (nu.size() != ud) throw DimensionMismatch("one Bernstein degree per axis is required");
  BernsteinApprox A;
  A.box = K;
  A.nu = nu;
  for (std::size_t i = 0; i < ud; ++i) {
    if (nu[i] < 0) throw ValidationError("Bernstein degree must be non-negative");
    if (K.lo[i] == K.hi[i]) A.nu[i] = 0;
  }
  Shape shape;
  for (int v : A.nu) shape.push_back(static_cast<std::size_t>(v) + 1);
  const auto st = strides(shape);
  const std::size_t n = volume(shape);
  const bool exact = f.trig_part().is_zero();
  if (!exact && !f.trig_part().is_real_valued()) {
    throw ValidationError("Bernstein approximation needs a real-valued function");
  }
  A.exact = exact;
  std::vector<Rational> x(ud);
  std::vector<Rational> vals;
  const Rational dyadic = pow2(precision_bits);
  const Rational tol = pow2(-precision_bits - 2);
  A.numerators.resize(n);
  if (exact) vals.resize(n);
  for (std::size_t flat = 0; flat < n; ++flat) {
    std::size_t rem = flat;
    for (std::size_t i = 0; i < ud; ++i) {
      const std::size_t k = rem / st[i];
      rem %= st[i];
      x[i] = A.nu[i] == 0 ? K.lo[i] : K.lo[i] + (K.hi[i] - K.lo[i]) * Rational(static_cast<long>(k), A.nu[i]);
      x[i].canonicalize();
    }
    if (exact) {
      vals[flat] = f.poly_part().evaluate(x);
    } else {
      const Value v = evaluate(f, x, tol);
      const Rational m = (v.re.lo + v.re.hi) / 2 * dyadic + Rational(1, 2);
      mpz_fdiv_q(A.numerators[flat].get_mpz_t(), m.get_num_mpz_t(), m.get_den_mpz_t());
    }
  }
  if (exact) {
    mpz_class L = 1;
    for (const auto& v : vals) mpz_lcm(L.get_mpz_t(), L.get_mpz_t(), v.get_den_mpz_t());
    for (std::size_t k = 0; k < n; ++k) A.numerators[k] = vals[k].get_num() * (L / vals[k].get_den());
    A.scale = Rational(mpz_class(1), L);
  } else {
    A.scale = pow2(-precision_bits);
  }
  return A;
}

PolyRep bernstein(const SmoothRep& f, int nu, const Box& K) {
  if (nu < 1) throw ValidationError("Bernstein degree must be at least 1");
  std::vector<int> degrees(static_cast<std::size_t>(K.dim()), nu);
  for (int i = 0; i < K.dim(); ++i) {
    if (f.dim() == K.dim() && f.derivative(i).is_zero()) degrees[static_cast<std::size_t>(i)] = 0;
  }
  return bernstein_samples(f, degrees, K).to_poly();
}

std::map<Exponent, Enclosure> bernstein_error(const SmoothRep& f, const BernsteinApprox& approx, int order,
                                              const Rational& tol, const SupBudget& budget) {
  if (order < 0) throw ValidationError("derivative order must be non-negative");
  return *certify(f, approx, order, tol, budget, std::nullopt);
}

std::vector<int> WitnessTerm::word() const {
  std::vector<int> w;
  for (std::size_t i = 0; i < letters.size(); ++i) w.insert(w.end(), static_cast<std::size_t>(letters[i]), static_cast<int>(i));
  return w;
}

QuantumPolynomial classical_to_quantum(const FormalFunction& p, const SymplecticStructure& S) {
  const int N = p.order();
  std::vector<PolyRep> residual;
  for (int m = 0; m <= N; ++m) {
    if (p[m].dim() != S.dim()) throw DimensionMismatch("polynomial dimension differs from 2n");
    if (!p[m].trig_part().is_zero()) throw ValidationError("classical_to_quantum needs polynomial coefficients");
    residual.push_back(p[m].poly_part());
  }
  WordProducts words(S, N, false);
  QuantumPolynomial q{p, {}};
  for (int a = 0; a <= N; ++a) {
    const PolyRep level = residual[static_cast<std::size_t>(a)];
    for (const auto& [e, c] : level.terms()) {
      q.witness.push_back({a, c, e});
      const FormalFunction& Q = words.get(e);
      for (int m = a; m <= N; ++m) {
        const SmoothRep& qm = Q[m - a];
        if (qm.is_zero()) continue;
        const PolyRep qp = qm.poly_part();
        for (const auto& [e2, c2] : qp.terms()) residual[static_cast<std::size_t>(m)].add_term(e2, -c * c2);
      }
    }
    if (!residual[static_cast<std::size_t>(a)].is_zero()) throw std::logic_error("quantization left a remainder");
  }
  return q;
}

QuantumPolynomial classical_to_quantum(const PolyRep& p, const SymplecticStructure& S, int N) {
  return classical_to_quantum(constant_series(p, N), S);
}

FormalFunction evaluate_witness(const QuantumPolynomial& q, const SymplecticStructure& S) {
  const int N = q.value.order();
  WordProducts words(S, N, true);
  std::vector<PolyRep> acc(static_cast<std::size_t>(N) + 1, PolyRep(S.dim()));
  for (const auto& t : q.witness) {
    if (t.hbar_power < 0) throw ValidationError("negative hbar power in witness");
    if (t.letters.size() != static_cast<std::size_t>(S.dim())) throw DimensionMismatch("witness word dimension");
    const FormalFunction& Q = words.get(t.letters);
    for (int m = t.hbar_power; m <= N; ++m) {
      const PolyRep qp = Q[m - t.hbar_power].poly_part();
      for (const auto& [e, c] : qp.terms()) {
        acc[static_cast<std::size_t>(m)].add_term(e, t.scalar * c);
      }
    }
  }
  std::vector<SmoothRep> coeffs(acc.begin(), acc.end());
  return FormalFunction(std::move(coeffs));
}

Rational weierstrass_threshold(int N) { return Rational(1) / (Rational(N + 2) * pow2(N + 1)); }

Rational weierstrass_guarantee(int N) { return Rational(N + 3) * pow2(-(N + 1)) + pow2(-(N + 1)); }

WeierstrassResult quantum_weierstrass(const FormalFunction& f, const Box& K, int N, const SymplecticStructure& S,
                                      const WeierstrassOptions& opt) {
  if (N < 1) throw ValidationError("N must be a positive integer");
  const int R = N + 1;
  if (f.order() < R) throw ValidationError("quantum_weierstrass needs f of order at least N+1");
  if (K.dim() != S.dim() || f[0].dim() != S.dim()) throw DimensionMismatch("box, function and 2n differ");
  const Rational eps = weierstrass_threshold(N);
  const Rational tol = eps / 8;
  const int d = K.dim();

  WeierstrassResult res;
  std::vector<SmoothRep> slices;
  for (int m = 0; m <= R; ++m) {
    const TrigRep T = f[m].trig_part();
    PolyRep p = f[m].poly_part();
    if (T.is_zero()) {
      std::map<Exponent, Enclosure> zero;
      for (const auto& I : multi_indices_up_to(d, R)) zero.emplace(I, Enclosure::point(0));
      res.degrees.push_back(0);
      res.slice_errors.push_back(std::move(zero));
      slices.emplace_back(std::move(p));
      continue;
    }
    if (!T.is_real_valued()) throw ValidationError("quantum_weierstrass needs real-valued coefficients");
    const SmoothRep Ts(T);
    bool done = false;
    for (int nu = 4; nu <= opt.max_degree; nu *= 2) {
      std::vector<int> degrees(static_cast<std::size_t>(d), 0);
      for (int i = 0; i < d; ++i) {
        if (!Ts.derivative(i).is_zero()) degrees[static_cast<std::size_t>(i)] = nu;
      }
      const long bits = 64 + static_cast<long>(R + 3) * (static_cast<long>(std::ceil(std::log2(nu + 1.0))) + 1);
      const BernsteinApprox A = bernstein_samples(Ts, degrees, K, bits);
      auto cert = certify(Ts, A, R, tol, opt.budget, eps);
      if (!cert) continue;
      p += A.to_poly();
      res.degrees.push_back(nu);
      res.slice_errors.push_back(std::move(*cert));
      slices.emplace_back(std::move(p));
      done = true;
      break;
    }
    if (!done) {
      throw BudgetExceeded("Bernstein degree budget " + std::to_string(opt.max_degree) +
                           " exceeded before the derivative thresholds were certified");
    }
  }

  res.p = classical_to_quantum(FormalFunction(std::move(slices)), S);
  std::vector<Enclosure> s;
  for (int k = 0; k <= R; ++k) {
    Enclosure sk = Enclosure::point(0);
    for (int i = 0; i <= k; ++i) {
      const int j = k - i;
      Enclosure norm = Enclosure::point(0);
      for (const auto& [I, e] : res.slice_errors[static_cast<std::size_t>(i)]) {
        if (total_degree(I) <= j) norm = hull_max(norm, e);
      }
      sk = sk + norm;
    }
    s.push_back(std::move(sk));
  }
  res.bound = distance_from_seminorms(s);
  return res;
}

std::string ConvergenceReport::csv() const {
  std::ostringstream out;
  out << "N,bound_hi,degree,seconds\n";
  char buf[64];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.17g", up_double(r.bound_hi));
    out << r.N << ',' << buf << ',' << r.degree << ',';
    std::snprintf(buf, sizeof buf, "%.3f", r.seconds);
    out << buf << '\n';
  }
  return out.str();
}

ConvergenceReport report_convergence(const FormalFunction& f, const Box& K, int N_from, int N_to,
                                     const SymplecticStructure& S, const WeierstrassOptions& opt) {
  ConvergenceReport rep;
  for (int N = N_from; N <= N_to; ++N) {
    const auto t0 = std::chrono::steady_clock::now();
    const WeierstrassResult r = quantum_weierstrass(f.truncated(N + 1), K, N, S, opt);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    int degree = 0;
    for (int v : r.degrees) degree = std::max(degree, v);
    if (!rep.rows.empty() && !(r.bound.hi < rep.rows.back().bound_hi)) rep.monotone = false;
    rep.rows.push_back({N, r.bound.hi, degree, secs});
  }
  return rep;
}

}  // namespace dq
