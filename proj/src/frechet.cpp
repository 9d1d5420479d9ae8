#include "deformq/frechet.hpp"

#include <map>

namespace dq {

Atlas Atlas::default_flat(int dim) {
  Atlas a;
  for (int i = 0; i < 4; ++i) a.charts.push_back(Box::cube(dim, Rational(-(i + 1)), Rational(i + 1)));
  return a;
}

Atlas Atlas::torus(int dim) {
  Atlas a;
  a.manifold = Manifold::torus;
  a.charts.push_back(Box::cube(dim, Rational(0), make_rational(710, 113)));
  return a;
}

Atlas Atlas::single(const Box& K) {
  Atlas a;
  a.charts.push_back(K);
  return a;
}

void Atlas::validate() const {
  if (charts.empty()) throw ValidationError("atlas has no charts");
  for (const auto& c : charts) {
    if (c.dim() != dim()) throw DimensionMismatch("atlas charts have different dimensions");
  }
  if (manifold == Manifold::torus) {
    const Rational two_pi = 2 * pi_enclosure().hi;
    for (int i = 0; i < dim(); ++i) {
      const auto u = static_cast<std::size_t>(i);
      if (charts[0].hi[u] - charts[0].lo[u] < two_pi) {
        throw ValidationError("torus chart 0 must contain a full period in every coordinate");
      }
    }
  }
}

namespace {

bool inside(const Box& a, const Box& b) {
  for (std::size_t i = 0; i < a.lo.size(); ++i) {
    if (a.lo[i] < b.lo[i] || a.hi[i] > b.hi[i]) return false;
  }
  return true;
}

// Charts 0..m not contained in another chart of that range; of equal charts the last is kept.
std::vector<std::size_t> maximal_charts(const Atlas& A, int m) {
  std::vector<std::size_t> keep;
  for (std::size_t c = 0; c <= static_cast<std::size_t>(m); ++c) {
    bool dominated = false;
    for (std::size_t d = 0; d <= static_cast<std::size_t>(m) && !dominated; ++d) {
      if (d == c || !inside(A.charts[c], A.charts[d])) continue;
      dominated = d > c || !inside(A.charts[d], A.charts[c]);
    }
    if (!dominated) keep.push_back(c);
  }
  return keep;
}

}  // namespace

std::vector<Enclosure> smooth_seminorms(const SmoothRep& f, int L, const Atlas& A, const NormOptions& opt) {
  if (L < 0) throw ValidationError("semi-norm index must be non-negative");
  A.validate();
  if (f.dim() != A.dim()) throw DimensionMismatch("function dimension differs from atlas dimension");
  std::vector<Enclosure> out;
  Enclosure running = Enclosure::point(0);
  const int last = static_cast<int>(A.charts.size()) - 1;
  std::vector<std::vector<SmoothRep>> derivs;
  // sups[order][index within order][chart]
  std::vector<std::vector<std::map<std::size_t, Enclosure>>> sups;
  for (int l = 0; l <= L; ++l) {
    std::vector<SmoothRep> level;
    if (l == 0) {
      level.push_back(f);
    } else {
      for (const auto& idx : multi_indices_of(f.dim(), l)) level.push_back(f.derivative(idx));
    }
    sups.emplace_back(level.size());
    derivs.push_back(std::move(level));
    const auto charts = maximal_charts(A, std::min(l, last));
    for (std::size_t order = 0; order < derivs.size(); ++order) {
      for (std::size_t j = 0; j < derivs[order].size(); ++j) {
        const SmoothRep& g = derivs[order][j];
        if (g.is_zero()) continue;
        for (const std::size_t c : charts) {
          auto it = sups[order][j].find(c);
          if (it == sups[order][j].end()) {
            it = sups[order][j].emplace(c, sup_enclosure(g, A.charts[c], opt.tol, opt.budget)).first;
          }
          running = hull_max(running, it->second);
        }
      }
    }
    out.push_back(running);
  }
  return out;
}

Enclosure smooth_seminorm(const SmoothRep& f, int l, const Atlas& A, const NormOptions& opt) {
  return smooth_seminorms(f, l, A, opt).back();
}

std::vector<Enclosure> formal_seminorms(const FormalFunction& f, int K, const Atlas& A, const NormOptions& opt) {
  if (K < 0) throw ValidationError("semi-norm index must be non-negative");
  if (K > f.order()) throw ValidationError("semi-norm index exceeds the truncation order");
  NormOptions inner = opt;
  inner.tol = opt.tol / (K + 1);
  std::vector<std::vector<Enclosure>> table;
  for (int i = 0; i <= K; ++i) {
    if (f[i].is_zero()) {
      table.emplace_back(static_cast<std::size_t>(K - i + 1), Enclosure::point(0));
    } else {
      table.push_back(smooth_seminorms(f[i], K - i, A, inner));
    }
  }
  std::vector<Enclosure> out;
  for (int k = 0; k <= K; ++k) {
    Enclosure s = Enclosure::point(0);
    for (int i = 0; i <= k; ++i) s = s + table[static_cast<std::size_t>(i)][static_cast<std::size_t>(k - i)];
    out.push_back(s);
  }
  return out;
}

Enclosure formal_seminorm(const FormalFunction& f, int k, const Atlas& A, const NormOptions& opt) {
  if (k < 0 || k > f.order()) throw ValidationError("semi-norm index exceeds the truncation order");
  // Only slices i <= k contribute.
  return formal_seminorms(f.truncated(k), k, A, opt).back();
}

Enclosure distance_from_seminorms(const std::vector<Enclosure>& s) {
  Rational lo(0), hi(0);
  for (std::size_t k = 0; k < s.size(); ++k) {
    const Rational w = pow2(-static_cast<long>(k));
    lo += w * s[k].lo / (1 + s[k].lo);
    hi += w * s[k].hi / (1 + s[k].hi);
  }
  const long K = s.empty() ? 0 : static_cast<long>(s.size()) - 1;
  return {lo, hi + pow2(-K)};
}

Enclosure frechet_distance(const FormalFunction& f, const FormalFunction& g, const Atlas& A, int K_terms,
                           const NormOptions& opt) {
  if (K_terms < 0) throw ValidationError("K_terms must be non-negative");
  const FormalFunction h = f - g;
  const int K = std::min(K_terms, h.order());
  return distance_from_seminorms(formal_seminorms(h, K, A, opt));
}

Enclosure compact_distance(const FormalFunction& f, const FormalFunction& g, const Box& K, int K_terms,
                           const NormOptions& opt) {
  return frechet_distance(f, g, Atlas::single(K), K_terms, opt);
}

Enclosure continuity_ratio(const FormalFunction& f, const FormalFunction& g, int l, const Atlas& A,
                           const SymplecticStructure& S, const NormOptions& opt) {
  NormOptions o = opt;
  for (int attempt = 0; attempt < 4; ++attempt, o.tol /= 16) {
    const Enclosure nf = formal_seminorm(f, l, A, o);
    const Enclosure ng = formal_seminorm(g, l, A, o);
    const Enclosure den = mul_nonneg(nf, ng);
    if (sgn(den.hi) == 0) throw ValidationError("continuity ratio has a zero denominator");
    if (sgn(den.lo) <= 0) continue;
    const Enclosure num = formal_seminorm(moyal(f, g, S), l, A, o);
    return {num.lo / den.hi, num.hi / den.lo};
  }
  throw ValidationError("continuity ratio denominator not bounded away from zero");
}

}  // namespace dq
