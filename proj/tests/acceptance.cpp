// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <cstdio>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>
#include <string>

#include "deformq/approx.hpp"
#include "deformq/bvgraphs.hpp"
#include "deformq/fedosov.hpp"
#include "deformq/frechet.hpp"
#include "deformq/random.hpp"
#include "deformq/trace.hpp"

using namespace dq;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double limit_seconds;
  std::function<Outcome()> body;
};

Rational q(long a, long b = 1) { return make_rational(a, b); }

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

Outcome poisson_compatibility() {
  RandomSource rng(101);
  int bad = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = trial < 100 ? 1 : 2;
    const auto S = SymplecticStructure::standard(n);
    const int N = 2;
    const auto f = constant_series(rng.poly(2 * n, 4, 5), N);
    const auto g = constant_series(rng.poly(2 * n, 4, 5), N);
    if (commutator(f, g, S)[1] != poisson(f[0], g[0], S)) ++bad;
  }
  return {bad == 0, "200 pairs, 2n = 2 and 4, mismatches " + std::to_string(bad)};
}

Outcome moyal_associativity() {
  RandomSource rng(202);
  const auto S = SymplecticStructure::standard(1);
  int bad = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int N = 1 + trial % 4;
    const auto f = rng.formal_poly(2, N, 3, 4), g = rng.formal_poly(2, N, 3, 4), h = rng.formal_poly(2, N, 3, 4);
    if (moyal(moyal(f, g, S), h, S) != moyal(f, moyal(g, h, S), S)) ++bad;
  }
  return {bad == 0, "100 triples, N = 1..4, mismatches " + std::to_string(bad)};
}

Outcome fedosov_flat_sections() {
  RandomSource rng(303);
  const auto F = FedosovData::flat(SymplecticStructure::standard(1));
  const int W = 10;
  int bad = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const auto f = rng.formal_poly(2, 3, 4, 4);
    const WeylElement O = flat_section(f, F, W);
    if (symbol(O, f.order()) != f || !check_flat(O, F).is_zero()) ++bad;
  }
  int coords_bad = 0;
  for (int i = 0; i < 2; ++i) {
    const WeylElement O = flat_section(constant_series(PolyRep::coordinate(2, i), 4), F, W);
    if (O != WeylElement::function(PolyRep::coordinate(2, i), W) + WeylElement::y(2, W, i)) ++coords_bad;
  }
  return {bad == 0 && coords_bad == 0,
          "50 polynomials at W = 10, failures " + std::to_string(bad) + ", coordinate sections off " +
              std::to_string(coords_bad)};
}

Outcome star_equivalence() {
  RandomSource rng(404);
  const auto F = FedosovData::flat(SymplecticStructure::standard(1));
  int bad = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const int N = 1 + trial % 3;
    const auto f = rng.formal_poly(2, N, 3, 4), g = rng.formal_poly(2, N, 3, 4);
    const auto r = star_via_flat_sections(f, g, F);
    if (!r.cap_sufficient || r.value != moyal(f, g, F.S)) ++bad;
  }
  return {bad == 0, "50 pairs, N = 1..3, mismatches " + std::to_string(bad)};
}

Outcome seminorm_laws() {
  RandomSource rng(505);
  NormOptions opt;
  opt.tol = q(1, 10000);
  const Atlas A = Atlas::default_flat(2);
  const int K = 3;
  auto draw = [&](int i) { return i % 2 == 0 ? rng.formal_poly(2, K, 3, 3) : rng.formal_trig(2, K, 2, 3); };
  int checks = 0;
  std::map<std::string, int> broken;
  FormalFunction prev = draw(0);
  for (int trial = 0; trial < 100; ++trial) {
    const FormalFunction f = draw(trial + 1);
    const auto s = formal_seminorms(f, K, A, opt);
    for (int k = 0; k <= K; ++k) {
      Enclosure additive = Enclosure::point(0);
      for (int i = 0; i <= k; ++i) additive = additive + smooth_seminorm(f[i], k - i, A, opt);
      broken["additive"] += !s[static_cast<std::size_t>(k)].overlaps(additive);
      if (k < K) broken["monotone"] += s[static_cast<std::size_t>(k)].lo > s[static_cast<std::size_t>(k) + 1].hi;
      broken["truncation"] += !formal_seminorm(f.truncated(k), k, A, opt).overlaps(s[static_cast<std::size_t>(k)]);
      checks += 3;
    }
    const Rational lambda = rng.rational(7, 5);
    const auto sl = formal_seminorms(f.scaled(lambda), K, A, opt);
    const auto sp = formal_seminorms(prev, K, A, opt);
    const auto ss = formal_seminorms(f + prev, K, A, opt);
    for (int k = 0; k <= K; ++k) {
      const auto u = static_cast<std::size_t>(k);
      broken["homogeneity"] += !sl[u].overlaps(scale_nonneg(s[u], abs(lambda)));
      broken["triangle"] += ss[u].lo > s[u].hi + sp[u].hi;
      checks += 2;
    }
    prev = f;
  }
  int total = 0;
  std::string detail;
  for (const auto& [law, n] : broken) {
    total += n;
    detail += " " + law + "=" + std::to_string(n);
  }
  return {total == 0, "100 formal functions, " + std::to_string(checks) + " checks, violations:" + detail};
}

Outcome frechet_continuity() {
  NormOptions opt;
  opt.tol = q(1, 1000);
  const Atlas A = Atlas::default_flat(2);
  const auto S = SymplecticStructure::standard(1);
  bool finite = true, stable = true;
  std::string detail;
  for (int l = 0; l <= 3; ++l) {
    RandomSource rng(600 + static_cast<std::uint64_t>(l));
    auto draw = [&] {
      FormalFunction f = rng.formal_poly(2, 3, 3, 3);
      while (f[0].is_zero()) f[0] = rng.poly(2, 3, 3);
      return f;
    };
    double run_max = 0, at50 = 0;
    for (int trial = 1; trial <= 100; ++trial) {
      const auto f = draw(), g = draw();
      const Enclosure r = continuity_ratio(f, g, l, A, S, opt);
      const double hi = r.hi.get_d();
      if (!std::isfinite(hi)) finite = false;
      run_max = std::max(run_max, hi);
      if (trial == 50) at50 = run_max;
    }
    // Stabilized: the second half raises the running maximum by at most half.
    const bool ok = run_max <= 1.5 * at50;
    stable = stable && ok;
    detail += " l=" + std::to_string(l) + ":max " + fmt(at50) + "->" + fmt(run_max);
  }
  return {finite && stable, "100 pairs per l, running max at 50 -> 100:" + detail};
}

Outcome quantum_weierstrass_density() {
  const auto S = SymplecticStructure::standard(1);
  const Box K = Box::cube(2, q(0), q(1));
  bool ok = true;
  Rational last(1000);
  std::string detail;
  for (int N = 1; N <= 5; ++N) {
    FormalFunction f(N + 1, SmoothRep(2));
    f[0] = SmoothRep(TrigRep::sine({1, 0}));
    const auto r = quantum_weierstrass(f, K, N, S);
    const bool below = r.bound.hi < weierstrass_guarantee(N);
    const bool decreasing = r.bound.hi < last;
    const bool sound = evaluate_witness(r.p, S) == r.p.value;
    ok = ok && below && decreasing && sound;
    last = r.bound.hi;
    detail += " N=" + std::to_string(N) + ":" + fmt(r.bound.hi.get_d()) + "<" + fmt(weierstrass_guarantee(N).get_d()) +
              (sound ? "" : "(witness mismatch)");
  }
  return {ok, "sin x1 on [0,1]^2, bounds" + detail};
}

Outcome trace_axioms() {
  const auto S = SymplecticStructure::standard(1);
  const int N = 4;
  int pairs = 0, bad = 0;
  std::vector<FormalFunction> modes;
  for (int a = -3; a <= 3; ++a) {
    for (int b = -3; b <= 3; ++b) modes.push_back(constant_series(TrigRep::mode({a, b}, ComplexRational(q(1))), N));
  }
  for (const auto& f : modes) {
    for (const auto& g : modes) {
      ++pairs;
      if (!cyclicity_defect(f, g, S, 1).is_zero()) ++bad;
    }
  }
  RandomSource rng(808);
  int norm_bad = 0;
  const auto S3 = SymplecticStructure::from_lower({{q(0), q(3)}, {q(-3), q(0)}});
  for (int trial = 0; trial < 50; ++trial) {
    const auto f = rng.formal_trig(2, N, 3, 4), g = rng.formal_trig(2, N, 3, 4);
    if (!cyclicity_defect(f, g, S, 1).is_zero() || !cyclicity_defect(f, g, S3, 1).is_zero()) ++bad;
    const TraceValue t = renormalized_trace(f, S, 1), t3 = renormalized_trace(f, S3, 1);
    for (int l = 0; l <= N; ++l) {
      // Integral of exp(i<k,x>) over [0, 2 pi]^2 is (2 pi)^2 for k = 0 and 0 otherwise.
      const ComplexRational integral = f[l].trig().zero_mode();
      if (t.twopi_pow != 2 || t.coeffs[l] != integral || t3.coeffs[l] != integral * ComplexRational(q(3))) ++norm_bad;
    }
  }
  return {bad == 0 && norm_bad == 0, std::to_string(pairs) + " mode pairs and 50 random pairs, defects " +
                                         std::to_string(bad) + ", normalization mismatches " + std::to_string(norm_bad)};
}

Outcome trace_continuity() {
  RandomSource rng(909);
  const Atlas A = Atlas::torus(2);
  int checks = 0, bad = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto f = rng.formal_trig(2, 4, 3, 4);
    for (int l = 0; l <= 4; ++l) {
      ++checks;
      if (!trace_continuity_check(f, l, A).holds) ++bad;
    }
  }
  return {bad == 0, std::to_string(checks) + " coefficient bounds, violations " + std::to_string(bad)};
}

// Independent count: every labeled genus assignment, black-degree vector and
// fixed-point-free pairing of labeled black half-edges without self-loops.
struct OracleCount {
  std::uint64_t labeled = 0;
  std::set<std::vector<int>> classes;
};

OracleCount pairing_oracle(int n, int l, int cap) {
  OracleCount r;
  const int V = 2 * n + 1;
  std::vector<int> genus(static_cast<std::size_t>(V)), black(static_cast<std::size_t>(V));
  auto classify = [&](const std::vector<int>& owner, const std::vector<int>& partner) {
    std::vector<int> perm(static_cast<std::size_t>(V));
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<int> best;
    do {
      std::vector<int> pos(static_cast<std::size_t>(V));
      for (int i = 0; i < V; ++i) pos[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])] = i;
      std::vector<int> key;
      for (int i = 0; i < V; ++i) key.push_back(genus[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])]);
      std::vector<std::pair<int, int>> edges;
      for (std::size_t h = 0; h < owner.size(); ++h) {
        const auto k = static_cast<std::size_t>(partner[h]);
        if (k < h) continue;
        const int a = pos[static_cast<std::size_t>(owner[h])], b = pos[static_cast<std::size_t>(owner[k])];
        edges.emplace_back(std::min(a, b), std::max(a, b));
      }
      std::sort(edges.begin(), edges.end());
      for (auto [a, b] : edges) {
        key.push_back(a);
        key.push_back(b);
      }
      if (best.empty() || key < best) best = key;
    } while (std::next_permutation(perm.begin() + 1, perm.end()));
    r.classes.insert(best);
  };
  std::function<void(int, int)> degrees = [&](int v, int remaining) {
    if (v == V) {
      if (remaining != 0) return;
      std::vector<int> owner;
      for (int u = 0; u < V; ++u) owner.insert(owner.end(), static_cast<std::size_t>(black[static_cast<std::size_t>(u)]), u);
      std::vector<int> partner(owner.size(), -1);
      std::function<void()> pair_up = [&] {
        const auto first = std::find(partner.begin(), partner.end(), -1);
        if (first == partner.end()) {
          ++r.labeled;
          classify(owner, partner);
          return;
        }
        const auto i = static_cast<std::size_t>(first - partner.begin());
        for (std::size_t j = i + 1; j < owner.size(); ++j) {
          if (partner[j] != -1 || owner[j] == owner[i]) continue;
          partner[i] = static_cast<int>(j);
          partner[j] = static_cast<int>(i);
          pair_up();
          partner[i] = partner[j] = -1;
        }
      };
      pair_up();
      return;
    }
    // Green vertices spend one unit of valency on their purple tail.
    const int limit = v == 0 ? cap : cap - 1;
    for (int b = 0; b <= std::min(limit, remaining); ++b) {
      black[static_cast<std::size_t>(v)] = b;
      degrees(v + 1, remaining - b);
    }
    black[static_cast<std::size_t>(v)] = 0;
  };
  std::function<void(int, int)> genera = [&](int v, int remaining) {
    if (v == V) {
      degrees(0, 2 * remaining);
      return;
    }
    for (int g = 0; g <= remaining; ++g) {
      genus[static_cast<std::size_t>(v)] = g;
      genera(v + 1, remaining - g);
    }
  };
  genera(0, l);
  return r;
}

Outcome graph_counting() {
  const int n = 1, cap = 4;
  bool ok = true;
  std::string detail;
  for (int l = 0; l <= 2; ++l) {
    const auto graphs = enumerate_admissible(n, l, cap);
    const auto oracle = pairing_oracle(n, l, cap);
    int identity_bad = 0, max_yellow = 0;
    for (const auto& G : graphs) {
      int p = 0, g = 0, purple = 0;
      for (const auto& v : G.vertices) (v.color == Color::yellow ? g : p) += v.genus;
      for (const auto& h : G.half_edges) purple += h.flavor == Flavor::purple;
      if (!admissible(G, n) || G.num_edges() != l - p - g || purple != 2 * n) ++identity_bad;
      max_yellow = std::max(max_yellow, G.valency(G.yellow_vertex()));
    }
    const auto loc = verify_locality_bound(n, l, cap);
    const bool counts = graphs.size() == oracle.classes.size() && labeled_admissible_count(n, l, cap) == oracle.labeled;
    ok = ok && counts && identity_bad == 0 && max_yellow <= l && loc.ok;
    detail += " l=" + std::to_string(l) + ":" + std::to_string(graphs.size()) + "/" +
              std::to_string(oracle.classes.size()) + " classes," + std::to_string(oracle.labeled) + " labeled,yellow<=" +
              std::to_string(max_yellow);
  }
  return {ok, "n=1 cap 4" + detail};
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  const std::vector<Criterion> criteria = {
      {1, "Poisson compatibility", 30, poisson_compatibility},
      {2, "Moyal associativity", 60, moyal_associativity},
      {3, "Fedosov flat sections", 30, fedosov_flat_sections},
      {4, "star-product equivalence", 60, star_equivalence},
      {5, "semi-norm laws", 60, seminorm_laws},
      {6, "Frechet-algebra continuity", 120, frechet_continuity},
      {7, "quantum Weierstrass", 600, quantum_weierstrass_density},
      {8, "trace axioms", 60, trace_axioms},
      {9, "trace continuity", 120, trace_continuity},
      {10, "graph counting", 60, graph_counting},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && only.count(c.id) == 0) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.body();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < c.limit_seconds;
    const bool pass = o.pass && in_time;
    failures += !pass;
    std::printf("%s %d %s: %s [%.2f s, limit %.0f s%s]\n", pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs,
                c.limit_seconds, in_time ? "" : ", over time");
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
