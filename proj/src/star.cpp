#include "deformq/star.hpp"

#include <map>

namespace dq {

Matrix inverse(const Matrix& m) {
  const std::size_t d = m.size();
  Matrix a = m;
  Matrix inv(d, std::vector<Rational>(d, Rational(0)));
  for (std::size_t i = 0; i < d; ++i) {
    if (a[i].size() != d) throw ValidationError("matrix is not square");
    inv[i][i] = 1;
  }
  for (std::size_t col = 0; col < d; ++col) {
    std::size_t piv = col;
    while (piv < d && sgn(a[piv][col]) == 0) ++piv;
    if (piv == d) throw ValidationError("matrix is singular");
    std::swap(a[piv], a[col]);
    std::swap(inv[piv], inv[col]);
    const Rational p = a[col][col];
    for (std::size_t j = 0; j < d; ++j) {
      a[col][j] /= p;
      inv[col][j] /= p;
    }
    for (std::size_t r = 0; r < d; ++r) {
      if (r == col || sgn(a[r][col]) == 0) continue;
      const Rational f = a[r][col];
      for (std::size_t j = 0; j < d; ++j) {
        a[r][j] -= f * a[col][j];
        inv[r][j] -= f * inv[col][j];
      }
    }
  }
  return inv;
}

SymplecticStructure::SymplecticStructure(int n, Matrix lower, Matrix upper)
    : n_(n), lower_(std::move(lower)), upper_(std::move(upper)), cache_(std::make_shared<Cache>()) {}

SymplecticStructure SymplecticStructure::standard(int n) {
  if (n <= 0) throw ValidationError("half-dimension n must be positive");
  const auto d = static_cast<std::size_t>(2 * n);
  Matrix lower(d, std::vector<Rational>(d, Rational(0)));
  for (std::size_t i = 0; i < d; i += 2) {
    lower[i][i + 1] = 1;
    lower[i + 1][i] = -1;
  }
  return from_lower(std::move(lower));
}

SymplecticStructure SymplecticStructure::from_lower(Matrix lower) {
  const std::size_t d = lower.size();
  if (d == 0 || d % 2 != 0) throw ValidationError("symplectic matrix must have even positive size");
  for (std::size_t i = 0; i < d; ++i) {
    if (lower[i].size() != d) throw ValidationError("symplectic matrix is not square");
  }
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      if (lower[i][j] != -lower[j][i]) throw ValidationError("symplectic matrix is not antisymmetric");
    }
  }
  Matrix upper = inverse(lower);
  return SymplecticStructure(static_cast<int>(d / 2), std::move(lower), std::move(upper));
}

namespace {

Rational pfaffian_of(const Matrix& a) {
  const std::size_t d = a.size();
  if (d == 0) return Rational(1);
  Rational s(0);
  for (std::size_t j = 1; j < d; ++j) {
    if (sgn(a[0][j]) == 0) continue;
    std::vector<std::size_t> keep;
    for (std::size_t r = 1; r < d; ++r) {
      if (r != j) keep.push_back(r);
    }
    Matrix minor(keep.size(), std::vector<Rational>(keep.size()));
    for (std::size_t r = 0; r < keep.size(); ++r) {
      for (std::size_t c = 0; c < keep.size(); ++c) minor[r][c] = a[keep[r]][keep[c]];
    }
    const Rational term = a[0][j] * pfaffian_of(minor);
    if (j % 2 == 1) {
      s += term;
    } else {
      s -= term;
    }
  }
  return s;
}

}  // namespace

Rational SymplecticStructure::pfaffian() const { return pfaffian_of(lower_); }

bool SymplecticStructure::is_standard() const { return *this == standard(n_); }

namespace {

struct PairEntry {
  int i, j;
  Rational w;
};

void expand_patterns(const std::vector<PairEntry>& pairs, std::size_t idx, int remaining, Rational coeff,
                     Exponent& left, Exponent& right, std::map<std::pair<Exponent, Exponent>, Rational>& out) {
  if (idx == pairs.size()) {
    if (remaining == 0) out[{left, right}] += coeff;
    return;
  }
  const auto& p = pairs[idx];
  Rational c = coeff;
  for (int a = 0; a <= remaining; ++a) {
    if (a > 0) {
      c *= p.w;
      c /= a;
      left[static_cast<std::size_t>(p.i)] += 1;
      right[static_cast<std::size_t>(p.j)] += 1;
    }
    expand_patterns(pairs, idx + 1, remaining - a, c, left, right, out);
  }
  left[static_cast<std::size_t>(p.i)] -= remaining;
  right[static_cast<std::size_t>(p.j)] -= remaining;
}

}  // namespace

const std::vector<MoyalPattern>& SymplecticStructure::patterns(int k) const {
  if (k < 0) throw ValidationError("Moyal order must be non-negative");
  std::lock_guard<std::mutex> lock(cache_->mu);
  auto& slots = cache_->by_order;
  if (slots.size() <= static_cast<std::size_t>(k)) slots.resize(static_cast<std::size_t>(k) + 1);
  auto& slot = slots[static_cast<std::size_t>(k)];
  if (!slot) {
    std::vector<PairEntry> pairs;
    for (int i = 0; i < dim(); ++i) {
      for (int j = 0; j < dim(); ++j) {
        if (sgn(upper(i, j)) != 0) pairs.push_back({i, j, upper(i, j)});
      }
    }
    std::map<std::pair<Exponent, Exponent>, Rational> merged;
    Exponent left(static_cast<std::size_t>(dim()), 0), right(static_cast<std::size_t>(dim()), 0);
    expand_patterns(pairs, 0, k, pow2(-k), left, right, merged);
    auto v = std::make_unique<std::vector<MoyalPattern>>();
    for (auto& [key, c] : merged) {
      if (sgn(c) != 0) v->push_back({c, key.first, key.second});
    }
    slot = std::move(v);
  }
  return *slot;
}

namespace {

void check_dims(const SmoothRep& f, const SmoothRep& g, const SymplecticStructure& S) {
  if (f.dim() != S.dim() || g.dim() != S.dim()) {
    throw DimensionMismatch("function dimension differs from 2n of the symplectic structure");
  }
}

// Order in each slot beyond which C_k vanishes (polynomial degree), or -1 for unbounded.
int derivative_order(const SmoothRep& f) {
  if (f.is_poly()) return f.poly().degree();
  return -1;
}

}  // namespace

SmoothRep poisson(const SmoothRep& f, const SmoothRep& g, const SymplecticStructure& S) {
  check_dims(f, g, S);
  SmoothRep r(S.dim());
  for (int i = 0; i < S.dim(); ++i) {
    SmoothRep fi = f.derivative(i);
    if (fi.is_zero()) continue;
    for (int j = 0; j < S.dim(); ++j) {
      if (sgn(S.upper(i, j)) == 0) continue;
      r += (fi * g.derivative(j)).scaled(S.upper(i, j));
    }
  }
  return r;
}

SmoothRep moyal_component(const SmoothRep& f, const SmoothRep& g, int k, const SymplecticStructure& S) {
  check_dims(f, g, S);
  if (k < 0) throw ValidationError("Moyal order must be non-negative");
  if (f.is_zero() || g.is_zero()) return SmoothRep(S.dim());
  const int df = derivative_order(f), dg = derivative_order(g);
  if ((df >= 0 && k > df) || (dg >= 0 && k > dg)) return SmoothRep(S.dim());
  if (k == 0) return f * g;
  std::map<Exponent, SmoothRep> fd, gd;
  auto deriv = [](std::map<Exponent, SmoothRep>& cache, const SmoothRep& h, const Exponent& e) -> const SmoothRep& {
    auto it = cache.find(e);
    if (it == cache.end()) it = cache.emplace(e, h.derivative(e)).first;
    return it->second;
  };
  SmoothRep r(S.dim());
  for (const auto& p : S.patterns(k)) {
    const SmoothRep& a = deriv(fd, f, p.left);
    if (a.is_zero()) continue;
    const SmoothRep& b = deriv(gd, g, p.right);
    if (b.is_zero()) continue;
    r += (a * b).scaled(p.coeff);
  }
  return r;
}

FormalFunction moyal(const FormalFunction& f, const FormalFunction& g, const SymplecticStructure& S) {
  const int N = std::min(f.order(), g.order());
  FormalFunction h(N, SmoothRep(S.dim()));
  for (int m1 = 0; m1 <= N; ++m1) {
    if (f[m1].is_zero()) continue;
    for (int m2 = 0; m1 + m2 <= N; ++m2) {
      if (g[m2].is_zero()) continue;
      for (int m3 = 0; m1 + m2 + m3 <= N; ++m3) h[m1 + m2 + m3] += moyal_component(f[m1], g[m2], m3, S);
    }
  }
  return h;
}

FormalFunction commutator(const FormalFunction& f, const FormalFunction& g, const SymplecticStructure& S) {
  return moyal(f, g, S) - moyal(g, f, S);
}

}  // namespace dq
