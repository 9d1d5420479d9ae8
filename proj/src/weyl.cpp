#include "deformq/weyl.hpp"

#include <bit>

namespace dq {

int WeylKey::form_degree() const { return std::popcount(dx); }

std::uint32_t dx_mask(std::initializer_list<int> indices) {
  std::uint32_t m = 0;
  for (int i : indices) {
    if (i < 0 || i >= 32) throw ValidationError("form index out of range");
    const std::uint32_t bit = std::uint32_t{1} << i;
    if ((m & bit) != 0) throw ValidationError("repeated form index");
    m |= bit;
  }
  return m;
}

std::vector<int> dx_indices(std::uint32_t mask) {
  std::vector<int> out;
  for (int i = 0; mask != 0; ++i, mask >>= 1) {
    if ((mask & 1U) != 0) out.push_back(i);
  }
  return out;
}

namespace {

// Sign of dx^A ^ dx^B rewritten in increasing order: parity of pairs a in A, b in B with a > b.
int wedge_sign(std::uint32_t a, std::uint32_t b) {
  int inversions = 0;
  for (std::uint32_t rest = b; rest != 0; rest &= rest - 1) {
    const int j = std::countr_zero(rest);
    inversions += std::popcount(a & ~((std::uint32_t{2} << j) - 1));
  }
  return (inversions % 2 == 0) ? 1 : -1;
}

// Number of elements of mask below index i.
int below(std::uint32_t mask, int i) { return std::popcount(mask & ((std::uint32_t{1} << i) - 1)); }

}  // namespace

WeylElement::WeylElement(int dim, int cap) : dim_(dim), cap_(cap) {
  if (dim <= 0 || dim > 32) throw ValidationError("Weyl bundle dimension must be in [1, 32]");
  if (cap < 0) throw ValidationError("weight cap must be non-negative");
}

WeylElement WeylElement::function(const SmoothRep& f, int cap) {
  WeylElement a(f.dim(), cap);
  a.add(WeylKey{0, Exponent(static_cast<std::size_t>(f.dim()), 0), 0}, f);
  return a;
}

WeylElement WeylElement::formal(const FormalFunction& f, int cap) {
  const int dim = f[0].dim();
  WeylElement a(dim, cap);
  for (int k = 0; k <= f.order(); ++k) a.add(WeylKey{k, Exponent(static_cast<std::size_t>(dim), 0), 0}, f[k]);
  return a;
}

WeylElement WeylElement::monomial(int dim, int cap, WeylKey key, const SmoothRep& c) {
  WeylElement a(dim, cap);
  a.add(key, c);
  return a;
}

WeylElement WeylElement::y(int dim, int cap, int i) {
  Exponent e(static_cast<std::size_t>(dim), 0);
  e.at(static_cast<std::size_t>(i)) = 1;
  return monomial(dim, cap, WeylKey{0, e, 0}, SmoothRep::constant(dim, 1));
}

WeylElement WeylElement::dx(int dim, int cap, int i) {
  if (i < 0 || i >= dim) throw ValidationError("form index out of range");
  return monomial(dim, cap, WeylKey{0, Exponent(static_cast<std::size_t>(dim), 0), dx_mask({i})},
                  SmoothRep::constant(dim, 1));
}

void WeylElement::add(const WeylKey& key, const SmoothRep& c) {
  if (static_cast<int>(key.y.size()) != dim_ || c.dim() != dim_) throw DimensionMismatch("Weyl term dimension");
  if (key.k < 0) throw ValidationError("negative hbar power");
  for (int v : key.y) {
    if (v < 0) throw ValidationError("negative y exponent");
  }
  if (dim_ < 32 && (key.dx >> dim_) != 0) throw ValidationError("form index beyond dim");
  if (c.is_zero()) return;
  if (key.weight() > cap_) {
    truncated_ = true;
    return;
  }
  auto [it, inserted] = terms_.try_emplace(key, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

WeylElement WeylElement::with_cap(int cap) const {
  WeylElement r(dim_, cap);
  r.truncated_ = truncated_;
  for (const auto& [k, c] : terms_) r.add(k, c);
  return r;
}

WeylElement WeylElement::weight_component(int m) const {
  WeylElement r(dim_, cap_);
  for (const auto& [k, c] : terms_) {
    if (k.weight() == m) r.terms_.emplace(k, c);
  }
  return r;
}

WeylElement WeylElement::form_component(int q) const {
  WeylElement r(dim_, cap_);
  for (const auto& [k, c] : terms_) {
    if (k.form_degree() == q) r.terms_.emplace(k, c);
  }
  return r;
}

int WeylElement::max_weight() const {
  int w = -1;
  for (const auto& [k, c] : terms_) w = std::max(w, k.weight());
  return w;
}

WeylElement& WeylElement::operator+=(const WeylElement& o) {
  if (dim_ != o.dim_) throw DimensionMismatch("Weyl element dimension mismatch");
  truncated_ = truncated_ || o.truncated_;
  for (const auto& [k, c] : o.terms_) add(k, c);
  return *this;
}

WeylElement& WeylElement::operator-=(const WeylElement& o) {
  if (dim_ != o.dim_) throw DimensionMismatch("Weyl element dimension mismatch");
  truncated_ = truncated_ || o.truncated_;
  for (const auto& [k, c] : o.terms_) add(k, -c);
  return *this;
}

WeylElement WeylElement::scaled(const Rational& s) const {
  WeylElement r(dim_, cap_);
  r.truncated_ = truncated_;
  if (sgn(s) == 0) return r;
  for (const auto& [k, c] : terms_) r.terms_.emplace(k, c.scaled(s));
  return r;
}

WeylElement WeylElement::hbar_shifted(int j) const {
  WeylElement r(dim_, cap_);
  r.truncated_ = truncated_;
  for (const auto& [k, c] : terms_) {
    if (k.k + j < 0) throw ValidationError("negative hbar power after shift");
    r.add(WeylKey{k.k + j, k.y, k.dx}, c);
  }
  return r;
}

bool operator==(const WeylElement& a, const WeylElement& b) {
  if (a.dim_ != b.dim_ || a.terms_.size() != b.terms_.size()) return false;
  auto it = b.terms_.begin();
  for (const auto& [k, c] : a.terms_) {
    if (!(k == it->first) || !(c == it->second)) return false;
    ++it;
  }
  return true;
}

namespace {

// d^beta y^alpha = alpha!/(alpha-beta)! y^{alpha-beta}; returns 0 if beta exceeds alpha.
Rational falling(const Exponent& alpha, const Exponent& beta, Exponent& out) {
  Rational f(1);
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (beta[i] > alpha[i]) return Rational(0);
    for (int j = 0; j < beta[i]; ++j) f *= alpha[i] - j;
    out[i] = alpha[i] - beta[i];
  }
  return f;
}

WeylElement moyal_with_cap(const WeylElement& a, const WeylElement& b, const SymplecticStructure& S, int cap) {
  if (a.dim() != b.dim() || a.dim() != S.dim()) throw DimensionMismatch("Weyl product dimension mismatch");
  WeylElement r(a.dim(), cap);
  if (a.truncated() || b.truncated()) r.mark_truncated();
  const auto d = static_cast<std::size_t>(a.dim());
  Exponent ra(d), rb(d), e(d);
  for (const auto& [ka, ca] : a.terms()) {
    for (const auto& [kb, cb] : b.terms()) {
      if ((ka.dx & kb.dx) != 0) continue;
      if (ka.weight() + kb.weight() > cap) {
        r.mark_truncated();
        continue;
      }
      const int sign = wedge_sign(ka.dx, kb.dx);
      const std::uint32_t mask = ka.dx | kb.dx;
      const SmoothRep prod = ca * cb;
      if (prod.is_zero()) continue;
      const int max_order = std::min(total_degree(ka.y), total_degree(kb.y));
      for (int order = 0; order <= max_order; ++order) {
        for (const auto& p : S.patterns(order)) {
          const Rational fa = falling(ka.y, p.left, ra);
          if (sgn(fa) == 0) continue;
          const Rational fb = falling(kb.y, p.right, rb);
          if (sgn(fb) == 0) continue;
          for (std::size_t i = 0; i < d; ++i) e[i] = ra[i] + rb[i];
          r.add(WeylKey{ka.k + kb.k + order, e, mask}, prod.scaled(p.coeff * fa * fb * sign));
        }
      }
    }
  }
  return r;
}

WeylElement odd_part(const WeylElement& a) {
  WeylElement r(a.dim(), a.cap());
  for (const auto& [k, c] : a.terms()) {
    if (k.form_degree() % 2 == 1) r.add(k, c);
  }
  return r;
}

WeylElement commutator_with_cap(const WeylElement& a, const WeylElement& b, const SymplecticStructure& S,
                                int cap) {
  WeylElement r = moyal_with_cap(a, b, S, cap);
  r -= moyal_with_cap(b, a, S, cap);
  r += moyal_with_cap(odd_part(b), odd_part(a), S, cap).scaled(Rational(2));
  return r;
}

}  // namespace

WeylElement fiberwise_moyal(const WeylElement& a, const WeylElement& b, const SymplecticStructure& S) {
  return moyal_with_cap(a, b, S, std::min(a.cap(), b.cap()));
}

WeylElement graded_commutator(const WeylElement& a, const WeylElement& b, const SymplecticStructure& S) {
  return commutator_with_cap(a, b, S, std::min(a.cap(), b.cap()));
}

WeylElement bracket_over_hbar(const WeylElement& a, const WeylElement& b, const SymplecticStructure& S) {
  const int cap = std::min(a.cap(), b.cap());
  WeylElement c = commutator_with_cap(a, b, S, cap + 2);
  WeylElement r(a.dim(), cap);
  if (c.truncated()) r.mark_truncated();
  for (const auto& [k, v] : c.terms()) {
    if (k.k == 0) throw ValidationError("commutator has a non-zero hbar^0 part; not divisible by hbar");
    r.add(WeylKey{k.k - 1, k.y, k.dx}, v);
  }
  return r;
}

WeylElement delta(const WeylElement& a) {
  WeylElement r(a.dim(), a.cap());
  if (a.truncated()) r.mark_truncated();
  for (const auto& [k, c] : a.terms()) {
    for (int i = 0; i < a.dim(); ++i) {
      const auto u = static_cast<std::size_t>(i);
      const std::uint32_t bit = std::uint32_t{1} << i;
      if (k.y[u] == 0 || (k.dx & bit) != 0) continue;
      Exponent e = k.y;
      e[u] -= 1;
      const int sign = below(k.dx, i) % 2 == 0 ? 1 : -1;
      r.add(WeylKey{k.k, e, k.dx | bit}, c.scaled(Rational(k.y[u] * sign)));
    }
  }
  return r;
}

namespace {

WeylElement delta_star_scaled(const WeylElement& a, bool normalize) {
  WeylElement r(a.dim(), a.cap());
  if (a.truncated()) r.mark_truncated();
  for (const auto& [k, c] : a.terms()) {
    const int pq = total_degree(k.y) + k.form_degree();
    if (normalize && pq == 0) continue;
    for (int i : dx_indices(k.dx)) {
      Exponent e = k.y;
      e[static_cast<std::size_t>(i)] += 1;
      Rational s(below(k.dx, i) % 2 == 0 ? 1 : -1);
      if (normalize) s /= pq;
      r.add(WeylKey{k.k, e, k.dx & ~(std::uint32_t{1} << i)}, c.scaled(s));
    }
  }
  return r;
}

}  // namespace

WeylElement delta_star(const WeylElement& a) { return delta_star_scaled(a, false); }

WeylElement delta_inv(const WeylElement& a) { return delta_star_scaled(a, true); }

WeylElement exterior_derivative(const WeylElement& a) {
  WeylElement r(a.dim(), a.cap());
  if (a.truncated()) r.mark_truncated();
  for (const auto& [k, c] : a.terms()) {
    for (int i = 0; i < a.dim(); ++i) {
      const std::uint32_t bit = std::uint32_t{1} << i;
      if ((k.dx & bit) != 0) continue;
      SmoothRep di = c.derivative(i);
      if (di.is_zero()) continue;
      const int sign = below(k.dx, i) % 2 == 0 ? 1 : -1;
      r.add(WeylKey{k.k, k.y, k.dx | bit}, di.scaled(Rational(sign)));
    }
  }
  return r;
}

FormalFunction symbol(const WeylElement& a, int N) {
  FormalFunction f(N, SmoothRep(a.dim()));
  for (const auto& [k, c] : a.terms()) {
    if (k.dx == 0 && total_degree(k.y) == 0 && k.k <= N) f[k.k] += c;
  }
  return f;
}

FormalFunction symbol(const WeylElement& a) { return symbol(a, a.cap() / 2); }

}  // namespace dq
