#include "deformq/io.hpp"

#include <cstdint>
#include <fstream>
#include <sstream>

namespace dq::io {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) { throw SchemaError(path.empty() ? "/" : path, msg); }

std::string at(const std::string& path, const std::string& key) { return path + "/" + key; }
std::string at(const std::string& path, std::size_t i) { return path + "/" + std::to_string(i); }

const json& field(const json& j, const std::string& path, const std::string& key) {
  if (!j.is_object()) fail(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(path, "missing field \"" + key + "\"");
  return *it;
}

const json* optional_field(const json& j, const std::string& path, const std::string& key) {
  if (!j.is_object()) fail(path, "expected an object");
  auto it = j.find(key);
  return it == j.end() || it->is_null() ? nullptr : &*it;
}

const json& array(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array");
  return j;
}

int integer(const json& j, const std::string& path, int min = INT32_MIN) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  const auto v = j.get<long long>();
  if (v < min || v > INT32_MAX) fail(path, "integer out of range");
  return static_cast<int>(v);
}

std::string string(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

Exponent int_vector(const json& j, const std::string& path, std::optional<int> len, int min = INT32_MIN) {
  array(j, path);
  if (len && static_cast<int>(j.size()) != *len) {
    fail(path, "expected " + std::to_string(*len) + " entries, got " + std::to_string(j.size()));
  }
  Exponent out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(integer(j[i], at(path, i), min));
  return out;
}

std::vector<Rational> rational_vector(const json& j, const std::string& path) {
  array(j, path);
  std::vector<Rational> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(rational_from_json(j[i], at(path, i)));
  return out;
}

json rational_vector_json(const std::vector<Rational>& v) {
  json a = json::array();
  for (const auto& q : v) a.push_back(to_json(q));
  return a;
}

Matrix matrix_from_json(const json& j, const std::string& path) {
  array(j, path);
  Matrix m;
  for (std::size_t i = 0; i < j.size(); ++i) {
    m.push_back(rational_vector(j[i], at(path, i)));
    if (m.back().size() != j.size()) fail(at(path, i), "matrix must be square");
  }
  return m;
}

bool is_scalar(const json& j) { return j.is_string() || j.is_number_integer(); }

// Wraps library validation failures with the JSON location that produced them.
template <class F>
auto located(const std::string& path, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const SchemaError&) {
    throw;
  } catch (const ValidationError& e) {
    fail(path, e.what());
  }
}

int dimension(const json& j, const std::string& path, std::optional<int> dim) {
  const int d = integer(field(j, path, "dim"), at(path, "dim"), 0);
  if (dim && *dim != d) fail(at(path, "dim"), "dimension " + std::to_string(d) + " does not match " + std::to_string(*dim));
  return d;
}

}  // namespace

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError("/", std::string("malformed JSON: ") + e.what());
  }
}

json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

json to_json(const Rational& q) { return to_string(q); }

Rational rational_from_json(const json& j, const std::string& path) {
  if (j.is_number_integer()) return Rational(mpz_class(std::to_string(j.get<long long>())));
  if (!j.is_string()) fail(path, "expected a rational string \"p/q\"");
  return located(path, [&] { return parse_rational(j.get<std::string>()); });
}

json to_json(const PolyRep& p) {
  json terms = json::array();
  for (const auto& [e, c] : p.terms()) terms.push_back({{"exp", e}, {"coeff", to_json(c)}});
  return {{"kind", "poly"}, {"dim", p.dim()}, {"terms", terms}};
}

json to_json(const TrigRep& t) {
  json modes = json::array();
  for (const auto& [k, c] : t.modes()) modes.push_back({{"k", k}, {"re", to_json(c.re)}, {"im", to_json(c.im)}});
  return {{"kind", "trig"}, {"dim", t.dim()}, {"modes", modes}};
}

json to_json(const SmoothRep& f) {
  if (f.is_poly()) return to_json(f.poly());
  if (f.is_trig()) return to_json(f.trig());
  const auto& s = std::get<SumRep>(f.rep());
  return {{"kind", "sum"}, {"parts", json::array({to_json(s.poly), to_json(s.trig)})}};
}

SmoothRep smooth_from_json(const json& j, const std::string& path, std::optional<int> dim) {
  const std::string kind = string(field(j, path, "kind"), at(path, "kind"));
  if (kind == "poly") {
    const int d = dimension(j, path, dim);
    PolyRep p(d);
    const std::string tp = at(path, "terms");
    const json& terms = array(field(j, path, "terms"), tp);
    for (std::size_t i = 0; i < terms.size(); ++i) {
      const std::string ip = at(tp, i);
      const Exponent e = int_vector(field(terms[i], ip, "exp"), at(ip, "exp"), d, 0);
      p.add_term(e, rational_from_json(field(terms[i], ip, "coeff"), at(ip, "coeff")));
    }
    return p;
  }
  if (kind == "trig") {
    const int d = dimension(j, path, dim);
    TrigRep t(d);
    const std::string mp = at(path, "modes");
    const json& modes = array(field(j, path, "modes"), mp);
    for (std::size_t i = 0; i < modes.size(); ++i) {
      const std::string ip = at(mp, i);
      const Exponent k = int_vector(field(modes[i], ip, "k"), at(ip, "k"), d);
      ComplexRational c(rational_from_json(field(modes[i], ip, "re"), at(ip, "re")));
      if (const json* im = optional_field(modes[i], ip, "im")) c.im = rational_from_json(*im, at(ip, "im"));
      t.add_mode(k, c);
    }
    return t;
  }
  if (kind == "sum") {
    const std::string pp = at(path, "parts");
    const json& parts = array(field(j, path, "parts"), pp);
    if (parts.empty()) fail(pp, "a sum needs at least one part");
    std::optional<SmoothRep> total;
    for (std::size_t i = 0; i < parts.size(); ++i) {
      SmoothRep part = smooth_from_json(parts[i], at(pp, i), total ? std::optional<int>(total->dim()) : dim);
      total = total ? *total + part : part;
    }
    return *total;
  }
  fail(at(path, "kind"), "unknown function kind \"" + kind + "\" (expected poly, trig or sum)");
}

json to_json(const FormalFunction& f) {
  json coeffs = json::array();
  for (const auto& c : f.coeffs()) coeffs.push_back(to_json(c));
  return {{"N", f.order()}, {"coeffs", coeffs}};
}

FormalFunction formal_from_json(const json& j, const std::string& path, std::optional<int> dim,
                                std::optional<int> default_N) {
  if (j.is_object() && j.contains("kind")) {
    const SmoothRep f = smooth_from_json(j, path, dim);
    return constant_series(f, default_N.value_or(kDefaultOrder));
  }
  const int N = integer(field(j, path, "N"), at(path, "N"), 0);
  const std::string cp = at(path, "coeffs");
  const json& coeffs = array(field(j, path, "coeffs"), cp);
  if (coeffs.size() > static_cast<std::size_t>(N) + 1) fail(cp, "more coefficients than N + 1");
  std::optional<int> d = dim;
  for (std::size_t i = 0; i < coeffs.size() && !d; ++i) {
    if (!is_scalar(coeffs[i])) d = smooth_from_json(coeffs[i], at(cp, i)).dim();
  }
  if (!d) fail(cp, "cannot infer the dimension from scalar coefficients alone");
  FormalFunction f(N, SmoothRep(*d));
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    const int k = static_cast<int>(i);
    f[k] = is_scalar(coeffs[i]) ? SmoothRep::constant(*d, rational_from_json(coeffs[i], at(cp, i)))
                                : smooth_from_json(coeffs[i], at(cp, i), d);
  }
  return f;
}

json to_json(const Enclosure& e) {
  return {{"lo", to_json(e.lo)}, {"hi", to_json(e.hi)}, {"approx", e.mid_double()}};
}

Enclosure enclosure_from_json(const json& j, const std::string& path) {
  Rational lo = rational_from_json(field(j, path, "lo"), at(path, "lo"));
  Rational hi = rational_from_json(field(j, path, "hi"), at(path, "hi"));
  if (lo > hi) fail(path, "lo exceeds hi");
  return {lo, hi};
}

json to_json(const Value& v) { return {{"re", to_json(v.re)}, {"im", to_json(v.im)}, {"exact", v.exact()}}; }

json to_json(const Box& b) { return {{"lo", rational_vector_json(b.lo)}, {"hi", rational_vector_json(b.hi)}}; }

Box box_from_json(const json& j, const std::string& path) {
  auto lo = rational_vector(field(j, path, "lo"), at(path, "lo"));
  auto hi = rational_vector(field(j, path, "hi"), at(path, "hi"));
  if (lo.size() != hi.size()) fail(at(path, "hi"), "lo and hi have different lengths");
  for (std::size_t i = 0; i < lo.size(); ++i) {
    if (lo[i] > hi[i]) fail(at(at(path, "lo"), i), "lower corner exceeds upper corner");
  }
  return located(path, [&] { return Box(lo, hi); });
}

json to_json(const Atlas& a) {
  json charts = json::array();
  for (const auto& b : a.charts) charts.push_back(to_json(b));
  return {{"manifold", a.manifold == Manifold::torus ? "torus" : "flat"}, {"charts", charts}};
}

Atlas atlas_from_json(const json& j, const std::string& path) {
  Atlas a;
  const std::string m = string(field(j, path, "manifold"), at(path, "manifold"));
  if (m == "torus") {
    a.manifold = Manifold::torus;
  } else if (m == "flat") {
    a.manifold = Manifold::flat_chart;
  } else {
    fail(at(path, "manifold"), "unknown manifold \"" + m + "\" (expected torus or flat)");
  }
  const std::string cp = at(path, "charts");
  const json& charts = array(field(j, path, "charts"), cp);
  for (std::size_t i = 0; i < charts.size(); ++i) a.charts.push_back(box_from_json(charts[i], at(cp, i)));
  located(cp, [&] { a.validate(); });
  return a;
}

json to_json(const SymplecticStructure& S) {
  json m = json::array();
  for (const auto& row : S.lower()) m.push_back(rational_vector_json(row));
  return {{"lower", m}};
}

SymplecticStructure symplectic_from_json(const json& j, const std::string& path) {
  if (const json* n = optional_field(j, path, "standard")) {
    const int v = integer(*n, at(path, "standard"), 1);
    return SymplecticStructure::standard(v);
  }
  const std::string lp = at(path, "lower");
  Matrix m = matrix_from_json(field(j, path, "lower"), lp);
  return located(lp, [&] { return SymplecticStructure::from_lower(m); });
}

json to_json(const WeylElement& a) {
  json terms = json::array();
  for (const auto& [key, c] : a.terms()) {
    terms.push_back({{"k", key.k}, {"y", key.y}, {"dx", dx_indices(key.dx)}, {"coeff", to_json(c)}});
  }
  return {{"dim", a.dim()}, {"cap", a.cap()}, {"truncated", a.truncated()}, {"terms", terms}};
}

WeylElement weyl_from_json(const json& j, const std::string& path) {
  const int d = integer(field(j, path, "dim"), at(path, "dim"), 0);
  const int cap = integer(field(j, path, "cap"), at(path, "cap"), 0);
  WeylElement a(d, cap);
  const std::string tp = at(path, "terms");
  const json& terms = array(field(j, path, "terms"), tp);
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const std::string ip = at(tp, i);
    WeylKey key;
    key.k = integer(field(terms[i], ip, "k"), at(ip, "k"), 0);
    key.y = int_vector(field(terms[i], ip, "y"), at(ip, "y"), d, 0);
    const Exponent dx = int_vector(field(terms[i], ip, "dx"), at(ip, "dx"), std::nullopt, 0);
    for (std::size_t r = 0; r < dx.size(); ++r) {
      if (dx[r] >= d) fail(at(at(ip, "dx"), r), "form index out of range");
      if (r > 0 && dx[r] <= dx[r - 1]) fail(at(at(ip, "dx"), r), "form indices must be strictly increasing");
      key.dx |= std::uint32_t{1} << dx[r];
    }
    const SmoothRep c = smooth_from_json(field(terms[i], ip, "coeff"), at(ip, "coeff"), d);
    located(ip, [&] { a.add(key, c); });
  }
  if (const json* t = optional_field(j, path, "truncated")) {
    if (!t->is_boolean()) fail(at(path, "truncated"), "expected a boolean");
    if (t->get<bool>()) a.mark_truncated();
  }
  return a;
}

json to_json(const FedosovData& F) {
  json out = {{"omega", to_json(F.S)}};
  if (F.christoffel) {
    json entries = json::array();
    const int d = F.christoffel->dim();
    for (int k = 0; k < d; ++k) {
      for (int i = 0; i < d; ++i) {
        for (int l = i; l < d; ++l) {
          const SmoothRep& g = (*F.christoffel)(k, i, l);
          if (!g.is_zero()) entries.push_back({{"k", k}, {"i", i}, {"j", l}, {"value", to_json(g)}});
        }
      }
    }
    out["christoffel"] = entries;
  }
  if (F.I) out["I"] = to_json(*F.I);
  return out;
}

FedosovData fedosov_from_json(const json& j, const std::string& path) {
  FedosovData F = FedosovData::flat(symplectic_from_json(field(j, path, "omega"), at(path, "omega")));
  const int d = F.dim();
  if (const json* c = optional_field(j, path, "christoffel")) {
    const std::string cp = at(path, "christoffel");
    array(*c, cp);
    Christoffel G(d);
    for (std::size_t r = 0; r < c->size(); ++r) {
      const std::string ip = at(cp, r);
      const json& e = (*c)[r];
      auto index = [&](const char* key) {
        const int v = integer(field(e, ip, key), at(ip, key), 0);
        if (v >= d) fail(at(ip, key), "index out of range");
        return v;
      };
      const int k = index("k"), i = index("i"), l = index("j");
      G.set(k, i, l, smooth_from_json(field(e, ip, "value"), at(ip, "value"), d));
    }
    F.christoffel = G;
  }
  if (const json* I = optional_field(j, path, "I")) {
    F.I = weyl_from_json(*I, at(path, "I"));
    if (F.I->dim() != d) fail(at(at(path, "I"), "dim"), "dimension does not match omega");
  }
  located(path, [&] { F.validate(); });
  return F;
}

json to_json(const QuantumPolynomial& q) {
  json words = json::array();
  for (const auto& w : q.witness) {
    words.push_back({{"hbar", w.hbar_power}, {"scalar", to_json(w.scalar)}, {"letters", w.letters}});
  }
  return {{"value", to_json(q.value)}, {"witness", words}};
}

QuantumPolynomial quantum_from_json(const json& j, const std::string& path) {
  QuantumPolynomial q;
  q.value = formal_from_json(field(j, path, "value"), at(path, "value"));
  const int d = q.value[0].dim();
  const std::string wp = at(path, "witness");
  const json& words = array(field(j, path, "witness"), wp);
  for (std::size_t i = 0; i < words.size(); ++i) {
    const std::string ip = at(wp, i);
    WitnessTerm w;
    w.hbar_power = integer(field(words[i], ip, "hbar"), at(ip, "hbar"), 0);
    w.scalar = rational_from_json(field(words[i], ip, "scalar"), at(ip, "scalar"));
    w.letters = int_vector(field(words[i], ip, "letters"), at(ip, "letters"), d, 0);
    q.witness.push_back(std::move(w));
  }
  return q;
}

json to_json(const TraceValue& t) {
  json coeffs = json::array();
  for (const auto& c : t.coeffs.coeffs()) {
    json e = {{"rat", to_json(c.re)}, {"twopi_pow", t.twopi_pow}};
    if (!c.is_real()) e["im"] = to_json(c.im);
    coeffs.push_back(e);
  }
  return {{"coeffs", coeffs}};
}

TraceValue trace_from_json(const json& j, const std::string& path) {
  const std::string cp = at(path, "coeffs");
  const json& coeffs = array(field(j, path, "coeffs"), cp);
  if (coeffs.empty()) fail(cp, "at least one coefficient is required");
  std::vector<ComplexRational> cs;
  std::optional<int> p;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    const std::string ip = at(cp, i);
    ComplexRational c(rational_from_json(field(coeffs[i], ip, "rat"), at(ip, "rat")));
    if (const json* im = optional_field(coeffs[i], ip, "im")) c.im = rational_from_json(*im, at(ip, "im"));
    const int pi = integer(field(coeffs[i], ip, "twopi_pow"), at(ip, "twopi_pow"), 0);
    if (p && *p != pi) fail(at(ip, "twopi_pow"), "all coefficients must share one power of 2 pi");
    p = pi;
    cs.push_back(c);
  }
  return {ComplexSeries(std::move(cs)), *p};
}

json to_json(const LabeledGraph& G) {
  json vertices = json::array();
  for (const auto& v : G.vertices) {
    vertices.push_back({{"color", v.color == Color::yellow ? "yellow" : "green"}, {"genus", v.genus}});
  }
  json half = json::array();
  for (const auto& h : G.half_edges) {
    half.push_back({{"vertex", h.vertex}, {"flavor", h.flavor == Flavor::black ? "black" : "purple"}});
  }
  return {{"vertices", vertices}, {"half_edges", half}, {"involution", G.involution}};
}

LabeledGraph graph_from_json(const json& j, const std::string& path) {
  LabeledGraph G;
  const std::string vp = at(path, "vertices");
  const json& vertices = array(field(j, path, "vertices"), vp);
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    const std::string ip = at(vp, i);
    GraphVertex v;
    const std::string c = string(field(vertices[i], ip, "color"), at(ip, "color"));
    if (c != "yellow" && c != "green") fail(at(ip, "color"), "expected yellow or green");
    v.color = c == "yellow" ? Color::yellow : Color::green;
    v.genus = integer(field(vertices[i], ip, "genus"), at(ip, "genus"), 0);
    G.vertices.push_back(v);
  }
  const std::string hp = at(path, "half_edges");
  const json& half = array(field(j, path, "half_edges"), hp);
  for (std::size_t i = 0; i < half.size(); ++i) {
    const std::string ip = at(hp, i);
    HalfEdge h;
    h.vertex = integer(field(half[i], ip, "vertex"), at(ip, "vertex"), 0);
    const std::string f = string(field(half[i], ip, "flavor"), at(ip, "flavor"));
    if (f != "black" && f != "purple") fail(at(ip, "flavor"), "expected black or purple");
    h.flavor = f == "black" ? Flavor::black : Flavor::purple;
    G.half_edges.push_back(h);
  }
  const std::string ip = at(path, "involution");
  G.involution = int_vector(field(j, path, "involution"), ip, static_cast<int>(G.half_edges.size()), 0);
  located(path, [&] { G.validate(); });
  return G;
}

}  // namespace dq::io
