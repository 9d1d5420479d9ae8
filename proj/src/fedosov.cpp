#include "deformq/fedosov.hpp"

namespace dq {

Christoffel::Christoffel(int dim)
    : dim_(dim), g_(static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim),
                    SmoothRep(dim)) {}

std::size_t Christoffel::index(int k, int i, int j) const {
  if (k < 0 || i < 0 || j < 0 || k >= dim_ || i >= dim_ || j >= dim_) {
    throw ValidationError("Christoffel index out of range");
  }
  const auto d = static_cast<std::size_t>(dim_);
  return (static_cast<std::size_t>(k) * d + static_cast<std::size_t>(i)) * d + static_cast<std::size_t>(j);
}

const SmoothRep& Christoffel::operator()(int k, int i, int j) const { return g_[index(k, i, j)]; }

void Christoffel::set(int k, int i, int j, const SmoothRep& g) {
  if (g.dim() != dim_) throw DimensionMismatch("Christoffel symbol dimension");
  g_[index(k, i, j)] = g;
  g_[index(k, j, i)] = g;
}

bool Christoffel::is_zero() const {
  return std::all_of(g_.begin(), g_.end(), [](const SmoothRep& g) { return g.is_zero(); });
}

void FedosovData::validate() const {
  if (christoffel) {
    if (christoffel->dim() != dim()) throw DimensionMismatch("Christoffel dimension differs from 2n");
    for (int k = 0; k < dim(); ++k) {
      for (int i = 0; i < dim(); ++i) {
        for (int j = 0; j < i; ++j) {
          if (!((*christoffel)(k, i, j) == (*christoffel)(k, j, i))) {
            throw ValidationError("Christoffel symbols must be symmetric in the lower indices");
          }
        }
      }
    }
  }
  if (I) {
    if (I->dim() != dim()) throw DimensionMismatch("correction I dimension differs from 2n");
    for (const auto& [k, c] : I->terms()) {
      if (k.form_degree() != 1) throw ValidationError("correction I must be a 1-form");
      if (k.weight() < 3) throw ValidationError("correction I must have weight >= 3");
    }
  }
}

WeylElement FedosovData::connection_form(int cap) const {
  WeylElement g(dim(), cap);
  if (!christoffel) return g;
  const auto d = static_cast<std::size_t>(dim());
  for (int i = 0; i < dim(); ++i) {
    for (int j = 0; j < dim(); ++j) {
      for (int k = 0; k < dim(); ++k) {
        SmoothRep c(dim());
        for (int l = 0; l < dim(); ++l) {
          if (sgn(S.lower(k, l)) == 0) continue;
          c += (*christoffel)(l, i, j).scaled(S.lower(k, l) / 2);
        }
        if (c.is_zero()) continue;
        Exponent y(d, 0);
        y[static_cast<std::size_t>(k)] += 1;
        y[static_cast<std::size_t>(j)] += 1;
        g.add(WeylKey{0, y, dx_mask({i})}, c);
      }
    }
  }
  return g;
}

namespace {

// d + (1/hbar)[Gamma-tilde, -]; preserves weight.
WeylElement nabla(const WeylElement& a, const FedosovData& F, const WeylElement* gamma) {
  WeylElement r = exterior_derivative(a);
  if (gamma != nullptr && !gamma->is_zero()) r += bracket_over_hbar(*gamma, a, F.S);
  return r;
}

}  // namespace

WeylElement covariant_derivative(const WeylElement& a, const FedosovData& F) {
  if (a.dim() != F.dim()) throw DimensionMismatch("Weyl element dimension differs from 2n");
  const WeylElement gamma = F.connection_form(a.cap());
  WeylElement r = nabla(a, F, &gamma);
  r -= delta(a);
  if (F.I && !F.I->is_zero()) r += bracket_over_hbar(F.I->with_cap(a.cap()), a, F.S);
  return r;
}

namespace {

int max_weight_of(const std::optional<WeylElement>& I) { return I ? I->max_weight() : -1; }

// Weight components O_0 .. O_W of the flat section; `bracket_tail` is the
// accumulated (1/hbar)[I, O] including weights beyond W.
struct Recursion {
  std::vector<WeylElement> components;
  WeylElement bracket_tail;
  bool truncated = false;
};

Recursion run_recursion(const FormalFunction& f, const FedosovData& F, int W) {
  F.validate();
  const int dim = F.dim();
  if (f[0].dim() != dim) throw DimensionMismatch("function dimension differs from 2n");
  if (W < 0) throw ValidationError("weight cap must be non-negative");
  const int wi = max_weight_of(F.I);
  const bool has_i = F.I && !F.I->is_zero();
  const int tail_cap = has_i ? W + std::max(0, wi - 2) : W;
  const WeylElement gamma = F.connection_form(W);
  const WeylElement I = has_i ? F.I->with_cap(tail_cap) : WeylElement(dim, tail_cap);
  Recursion rec{{}, WeylElement(dim, tail_cap)};
  const Exponent zero(static_cast<std::size_t>(dim), 0);
  for (int m = 0; m <= W; ++m) {
    WeylElement Om(dim, W);
    if (m % 2 == 0 && m / 2 <= f.order()) Om.add(WeylKey{m / 2, zero, 0}, f[m / 2]);
    if (m > 0) {
      WeylElement rhs = nabla(rec.components.back(), F, &gamma);
      rhs += rec.bracket_tail.weight_component(m - 1).with_cap(W);
      Om += delta_inv(rhs).weight_component(m);
    }
    if (has_i && !Om.is_zero()) rec.bracket_tail += bracket_over_hbar(I, Om.with_cap(tail_cap), F.S);
    rec.truncated = rec.truncated || Om.truncated();
    rec.components.push_back(std::move(Om));
  }
  return rec;
}

}  // namespace

WeylElement flat_section(const FormalFunction& f, const FedosovData& F, int W) {
  Recursion rec = run_recursion(f, F, W);
  WeylElement O(F.dim(), W);
  for (const auto& c : rec.components) O += c;
  if (rec.truncated) O.mark_truncated();
  return O;
}

WeylElement check_flat(const WeylElement& O, const FedosovData& F) {
  F.validate();
  WeylElement d = covariant_derivative(O, F);
  WeylElement r(O.dim(), O.cap());
  for (int m = 0; m < O.cap(); ++m) r += d.weight_component(m);
  return r;
}

StarViaFlat star_via_flat_sections(const FormalFunction& f, const FormalFunction& g, const FedosovData& F,
                                   std::optional<int> W) {
  const int N = std::min(f.order(), g.order());
  const int cap = W ? *W : 2 * N + std::max(0, max_poly_degree(f)) + std::max(0, max_poly_degree(g));
  const WeylElement Of = flat_section(f.truncated(N), F, cap);
  const WeylElement Og = flat_section(g.truncated(N), F, cap);
  return {symbol(fiberwise_moyal(Of, Og, F.S), N), cap >= 2 * N, cap};
}

Quantizability is_quantizable(const FormalFunction& f, const FedosovData& F, int W_max) {
  Recursion rec = run_recursion(f, F, W_max);
  int last_f = -1;
  for (int k = 0; k <= f.order(); ++k) {
    if (!f[k].is_zero()) last_f = 2 * k;
  }
  int highest = -1;
  for (int m = 0; m <= W_max; ++m) {
    if (!rec.components[static_cast<std::size_t>(m)].is_zero()) highest = m;
  }
  // Two vanishing components beyond the last f insertion and beyond every
  // non-zero component, with no bracket contribution left at or above them.
  const int first_zero = std::max(highest, last_f) + 1;
  if (first_zero + 1 > W_max) return {false, -1, W_max};
  for (const auto& [k, c] : rec.bracket_tail.terms()) {
    if (k.weight() >= first_zero - 1) return {false, -1, W_max};
  }
  if (rec.bracket_tail.truncated()) return {false, -1, W_max};
  return {true, std::max(highest, 0), W_max};
}

bool jet_locality_test(const FormalFunction& f, const std::vector<Rational>& x0, int m, const FedosovData& F,
                       const std::optional<SmoothRep>& perturbation) {
  const int dim = F.dim();
  if (static_cast<int>(x0.size()) != dim) throw DimensionMismatch("base point dimension differs from 2n");
  if (m < 0) throw ValidationError("jet order must be non-negative");
  SmoothRep p(dim);
  if (perturbation) {
    p = *perturbation;
  } else {
    for (int i = 0; i < dim; ++i) {
      const SmoothRep shifted = PolyRep::coordinate(dim, i) - PolyRep::constant(dim, x0[static_cast<std::size_t>(i)]);
      SmoothRep power = SmoothRep::constant(dim, 1);
      for (int r = 0; r <= m; ++r) power = power * shifted;
      p += power;
    }
  }
  FormalFunction g = f;
  g[0] += p;
  const WeylElement a = flat_section(f, F, m).weight_component(m);
  const WeylElement b = flat_section(g, F, m).weight_component(m);
  const WeylElement diff = b - a;
  for (const auto& [k, c] : diff.terms()) {
    const Value v = evaluate(c, x0);
    if (!v.re.contains(0) || !v.im.contains(0)) return false;
  }
  return true;
}

}  // namespace dq
