#include "deformq/bvgraphs.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <string>

#include "deformq/rational.hpp"

namespace dq {

void LabeledGraph::validate() const {
  if (involution.size() != half_edges.size()) throw ValidationError("involution size differs from half-edge count");
  const int h = static_cast<int>(half_edges.size());
  for (int i = 0; i < h; ++i) {
    const int j = involution[static_cast<std::size_t>(i)];
    if (j < 0 || j >= h) throw ValidationError("involution maps half-edge " + std::to_string(i) + " out of range");
    if (involution[static_cast<std::size_t>(j)] != i) throw ValidationError("pairing map is not an involution");
    const int v = half_edges[static_cast<std::size_t>(i)].vertex;
    if (v < 0 || v >= static_cast<int>(vertices.size())) throw ValidationError("half-edge attached to a missing vertex");
  }
  for (const auto& v : vertices) {
    if (v.genus < 0) throw ValidationError("vertex genus must be non-negative");
  }
}

int LabeledGraph::num_edges() const {
  int e = 0;
  for (std::size_t i = 0; i < involution.size(); ++i) {
    if (involution[i] > static_cast<int>(i)) ++e;
  }
  return e;
}

int LabeledGraph::valency(int v) const {
  return static_cast<int>(std::count_if(half_edges.begin(), half_edges.end(), [v](const HalfEdge& h) { return h.vertex == v; }));
}

int LabeledGraph::yellow_vertex() const {
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    if (vertices[i].color == Color::yellow) return static_cast<int>(i);
  }
  return -1;
}

bool admissible(const LabeledGraph& G, int n) {
  G.validate();
  const auto yellow = std::count_if(G.vertices.begin(), G.vertices.end(), [](const GraphVertex& v) { return v.color == Color::yellow; });
  if (yellow != 1 || static_cast<int>(G.vertices.size()) != 2 * n + 1) return false;
  std::vector<int> purple_tails(G.vertices.size(), 0);
  for (std::size_t i = 0; i < G.half_edges.size(); ++i) {
    const HalfEdge& h = G.half_edges[i];
    const auto j = static_cast<std::size_t>(G.involution[i]);
    const bool tail = j == i;
    if (h.flavor == Flavor::purple) {
      if (G.vertices[static_cast<std::size_t>(h.vertex)].color == Color::yellow) return false;
      if (!tail) return false;
      ++purple_tails[static_cast<std::size_t>(h.vertex)];
    } else {
      if (tail) return false;
      if (G.half_edges[j].flavor != Flavor::black) return false;
      if (G.half_edges[j].vertex == h.vertex) return false;
    }
  }
  for (std::size_t v = 0; v < G.vertices.size(); ++v) {
    if (G.vertices[v].color == Color::green && purple_tails[v] != 1) return false;
  }
  return true;
}

int hbar_order(const LabeledGraph& G, int n) {
  if (!admissible(G, n)) throw ValidationError("hbar_order needs an admissible graph");
  int genus = 0;
  for (const auto& v : G.vertices) genus += v.genus;
  return genus + G.num_edges();
}

namespace {

// Vertex 0 is yellow, 1..2n green; m[u][v] counts edges between u and v.
struct Profile {
  std::vector<int> genus;
  std::vector<std::vector<int>> m;
};

std::vector<int> encode(const Profile& p, const std::vector<int>& perm) {
  const std::size_t V = p.genus.size();
  std::vector<int> key;
  for (std::size_t i = 0; i < V; ++i) key.push_back(p.genus[static_cast<std::size_t>(perm[i])]);
  for (std::size_t i = 0; i < V; ++i) {
    for (std::size_t j = i + 1; j < V; ++j) key.push_back(p.m[static_cast<std::size_t>(perm[i])][static_cast<std::size_t>(perm[j])]);
  }
  return key;
}

std::vector<int> canonical(const Profile& p) {
  std::vector<int> perm(p.genus.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<int> best = encode(p, perm);
  while (std::next_permutation(perm.begin() + 1, perm.end())) best = std::min(best, encode(p, perm));
  return best;
}

Profile profile_of(const LabeledGraph& G) {
  const std::size_t V = G.vertices.size();
  Profile p{std::vector<int>(V, 0), std::vector<std::vector<int>>(V, std::vector<int>(V, 0))};
  // Yellow first, greens in their given order.
  std::vector<int> slot(V, 0);
  int next = 1;
  for (std::size_t v = 0; v < V; ++v) slot[v] = G.vertices[v].color == Color::yellow ? 0 : next++;
  for (std::size_t v = 0; v < V; ++v) p.genus[static_cast<std::size_t>(slot[v])] = G.vertices[v].genus;
  for (std::size_t i = 0; i < G.half_edges.size(); ++i) {
    const auto j = static_cast<std::size_t>(G.involution[i]);
    if (j <= i) continue;
    const auto a = static_cast<std::size_t>(slot[static_cast<std::size_t>(G.half_edges[i].vertex)]);
    const auto b = static_cast<std::size_t>(slot[static_cast<std::size_t>(G.half_edges[j].vertex)]);
    p.m[a][b] += 1;
    if (a != b) p.m[b][a] += 1;
  }
  return p;
}

LabeledGraph build(const Profile& p) {
  LabeledGraph G;
  const std::size_t V = p.genus.size();
  for (std::size_t v = 0; v < V; ++v) G.vertices.push_back({v == 0 ? Color::yellow : Color::green, p.genus[v]});
  std::vector<std::vector<int>> slots(V);
  for (std::size_t v = 0; v < V; ++v) {
    if (v > 0) {
      G.half_edges.push_back({static_cast<int>(v), Flavor::purple});
      G.involution.push_back(static_cast<int>(G.half_edges.size()) - 1);
    }
    for (std::size_t u = 0; u < V; ++u) {
      for (int k = 0; k < p.m[v][u]; ++k) {
        slots[v].push_back(static_cast<int>(G.half_edges.size()));
        G.half_edges.push_back({static_cast<int>(v), Flavor::black});
        G.involution.push_back(-1);
      }
    }
  }
  // Pair the k-th (v -> u) slot with the k-th (u -> v) slot.
  std::vector<std::size_t> cursor(V, 0);
  for (std::size_t v = 0; v < V; ++v) {
    for (std::size_t u = v + 1; u < V; ++u) {
      for (int k = 0; k < p.m[v][u]; ++k) {
        std::size_t cv = 0, cu = 0;
        for (std::size_t w = 0; w < u; ++w) cv += static_cast<std::size_t>(p.m[v][w]);
        for (std::size_t w = 0; w < v; ++w) cu += static_cast<std::size_t>(p.m[u][w]);
        const int a = slots[v][cv + static_cast<std::size_t>(k)];
        const int b = slots[u][cu + static_cast<std::size_t>(k)];
        G.involution[static_cast<std::size_t>(a)] = b;
        G.involution[static_cast<std::size_t>(b)] = a;
      }
    }
  }
  return G;
}

// Calls fn for every labeled profile of order l within the valency cap.
void for_each_profile(int n, int l, int cap, const std::function<void(const Profile&)>& fn) {
  if (n < 1) throw ValidationError("n must be positive");
  if (l < 0) throw ValidationError("order l must be non-negative");
  if (cap < 0) throw ValidationError("valency cap must be non-negative");
  const std::size_t V = static_cast<std::size_t>(2 * n + 1);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t u = 0; u < V; ++u) {
    for (std::size_t v = u + 1; v < V; ++v) pairs.emplace_back(u, v);
  }
  Profile p{std::vector<int>(V, 0), std::vector<std::vector<int>>(V, std::vector<int>(V, 0))};
  std::vector<int> deg(V, 0);
  for (std::size_t v = 1; v < V; ++v) deg[v] = 1;
  if (cap < 1) return;  // every green vertex carries a purple tail
  std::function<void(std::size_t, int)> edges = [&](std::size_t idx, int remaining) {
    if (idx == pairs.size()) {
      if (remaining == 0) fn(p);
      return;
    }
    const auto [u, v] = pairs[idx];
    for (int k = 0; k <= remaining; ++k) {
      if (deg[u] + k > cap || deg[v] + k > cap) break;
      p.m[u][v] = p.m[v][u] = k;
      deg[u] += k;
      deg[v] += k;
      edges(idx + 1, remaining - k);
      deg[u] -= k;
      deg[v] -= k;
    }
    p.m[u][v] = p.m[v][u] = 0;
  };
  std::function<void(std::size_t, int)> genera = [&](std::size_t v, int remaining) {
    if (v == V) {
      edges(0, remaining);
      return;
    }
    for (int g = 0; g <= remaining; ++g) {
      p.genus[v] = g;
      genera(v + 1, remaining - g);
    }
    p.genus[v] = 0;
  };
  genera(0, l);
}

}  // namespace

std::vector<int> canonical_form(const LabeledGraph& G) { return canonical(profile_of(G)); }

std::vector<LabeledGraph> enumerate_admissible(int n, int l, int valency_cap, const GraphBudget& budget) {
  std::set<std::vector<int>> seen;
  std::vector<LabeledGraph> out;
  std::size_t visited = 0;
  for_each_profile(n, l, valency_cap, [&](const Profile& p) {
    if (++visited > budget.max_graphs) throw BudgetExceeded("graph enumeration budget exceeded");
    std::vector<int> key = canonical(p);
    if (!seen.insert(key).second) return;
    // Rebuild from the canonical encoding so the output is canonical too.
    const std::size_t V = p.genus.size();
    Profile c{std::vector<int>(key.begin(), key.begin() + static_cast<long>(V)),
              std::vector<std::vector<int>>(V, std::vector<int>(V, 0))};
    std::size_t at = V;
    for (std::size_t i = 0; i < V; ++i) {
      for (std::size_t j = i + 1; j < V; ++j) c.m[i][j] = c.m[j][i] = key[at++];
    }
    out.push_back(build(c));
  });
  std::sort(out.begin(), out.end(), [](const LabeledGraph& a, const LabeledGraph& b) {
    return canonical_form(a) < canonical_form(b);
  });
  return out;
}

std::uint64_t labeled_admissible_count(int n, int l, int valency_cap) {
  std::uint64_t total = 0;
  for_each_profile(n, l, valency_cap, [&](const Profile& p) {
    const std::size_t V = p.genus.size();
    std::uint64_t num = 1, den = 1;
    for (std::size_t v = 0; v < V; ++v) {
      int b = 0;
      for (std::size_t u = 0; u < V; ++u) b += p.m[v][u];
      for (int i = 2; i <= b; ++i) num *= static_cast<std::uint64_t>(i);
      for (std::size_t u = v + 1; u < V; ++u) {
        for (int i = 2; i <= p.m[v][u]; ++i) den *= static_cast<std::uint64_t>(i);
      }
    }
    total += num / den;
  });
  return total;
}

LocalityReport verify_locality_bound(int n, int l, int valency_cap, const GraphBudget& budget) {
  LocalityReport r;
  for (const auto& G : enumerate_admissible(n, l, valency_cap, budget)) {
    ++r.graphs;
    const int yv = G.valency(G.yellow_vertex());
    const int e = G.num_edges();
    r.max_yellow_valency = std::max(r.max_yellow_valency, yv);
    if (!admissible(G, n) || hbar_order(G, n) != l || yv > e || e > l) r.ok = false;
  }
  return r;
}

}  // namespace dq
