#include "cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>

#include "deformq/io.hpp"
#include "deformq/random.hpp"

namespace dq::cli {

namespace {

using io::json;
using Clock = std::chrono::steady_clock;

struct Globals {
  std::string omega = "standard";
  std::string atlas = "flat";
  std::optional<int> N;
  int W = 8;
  std::string tol = "1/1000000";
  std::uint64_t seed = 7;
  std::optional<long> budget_ms;
};

class InputError : public ValidationError {
 public:
  InputError(std::string file, const io::SchemaError& e)
      : ValidationError(e.what()), file_(std::move(file)), path_(e.path()) {}
  const std::string& file() const { return file_; }
  const std::string& path() const { return path_; }

 private:
  std::string file_;
  std::string path_;
};

template <class F>
auto from_file(const std::string& file, F&& parse) {
  try {
    return parse(io::read_file(file));
  } catch (const io::SchemaError& e) {
    throw InputError(file, e);
  }
}

class Context {
 public:
  explicit Context(const Globals& g) : g_(g) {
    if (g.budget_ms) deadline_ = Clock::now() + std::chrono::milliseconds(*g.budget_ms);
  }

  int order_or(int fallback) const { return g_.N.value_or(fallback); }
  const Globals& globals() const { return g_; }

  FormalFunction formal(const std::string& file, std::optional<int> dim = std::nullopt,
                        std::optional<int> lift = std::nullopt) const {
    const int N = lift.value_or(order_or(kDefaultOrder));
    return from_file(file, [&](const json& j) { return io::formal_from_json(j, "", dim, N); });
  }

  SymplecticStructure omega(int dim) const {
    if (g_.omega == "standard") {
      if (dim <= 0 || dim % 2 != 0) throw DimensionMismatch("the standard structure needs an even dimension, got " + std::to_string(dim));
      return SymplecticStructure::standard(dim / 2);
    }
    auto S = from_file(g_.omega, [](const json& j) { return io::symplectic_from_json(j); });
    if (S.dim() != dim) throw DimensionMismatch("omega has dimension " + std::to_string(S.dim()) + ", functions have " + std::to_string(dim));
    return S;
  }

  Atlas atlas(int dim) const {
    if (g_.atlas == "flat") return Atlas::default_flat(dim);
    if (g_.atlas == "torus") return Atlas::torus(dim);
    auto A = from_file(g_.atlas, [](const json& j) { return io::atlas_from_json(j); });
    if (A.dim() != dim) throw DimensionMismatch("atlas has dimension " + std::to_string(A.dim()) + ", functions have " + std::to_string(dim));
    return A;
  }

  FedosovData connection(const std::string& choice, int dim) const {
    if (choice == "flat") return FedosovData::flat(omega(dim));
    auto F = from_file(choice, [](const json& j) { return io::fedosov_from_json(j); });
    if (F.dim() != dim) throw DimensionMismatch("connection has dimension " + std::to_string(F.dim()) + ", functions have " + std::to_string(dim));
    return F;
  }

  NormOptions norms() const {
    NormOptions opt;
    opt.tol = parse_rational(g_.tol);
    if (opt.tol <= 0) throw ValidationError("--tol must be positive");
    opt.budget.deadline = deadline_;
    return opt;
  }

  void check_deadline() const {
    if (deadline_ && Clock::now() > *deadline_) throw BudgetExceeded("time budget of " + std::to_string(*g_.budget_ms) + " ms exhausted");
  }

 private:
  Globals g_;
  std::optional<Clock::time_point> deadline_;
};

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw ValidationError("cannot write " + path);
  f << text;
}

// Randomized invariant suites; each case returns true when the identity holds.
using Case = std::function<bool(RandomSource&, int)>;

std::map<std::string, Case> suites() {
  std::map<std::string, Case> s;
  s["associativity"] = [](RandomSource& rng, int N) {
    const auto S = SymplecticStructure::standard(1);
    const auto f = rng.formal_poly(2, N, 3, 3), g = rng.formal_poly(2, N, 3, 3), h = rng.formal_poly(2, N, 3, 3);
    return moyal(moyal(f, g, S), h, S) == moyal(f, moyal(g, h, S), S);
  };
  s["poisson"] = [](RandomSource& rng, int N) {
    const int n = rng.integer(1, 2);
    const auto S = SymplecticStructure::standard(n);
    const auto f = constant_series(rng.poly(2 * n, 4, 4), std::max(N, 1));
    const auto g = constant_series(rng.poly(2 * n, 4, 4), std::max(N, 1));
    return commutator(f, g, S)[1] == poisson(f[0], g[0], S);
  };
  s["flat-sections"] = [](RandomSource& rng, int N) {
    const auto F = FedosovData::flat(SymplecticStructure::standard(1));
    const auto f = rng.formal_poly(2, N, 3, 3);
    const WeylElement O = flat_section(f, F, 2 * N + 4);
    return symbol(O, N) == f && check_flat(O, F).is_zero();
  };
  s["equivalence"] = [](RandomSource& rng, int N) {
    const auto F = FedosovData::flat(SymplecticStructure::standard(1));
    const auto f = rng.formal_poly(2, N, 3, 3), g = rng.formal_poly(2, N, 3, 3);
    const auto r = star_via_flat_sections(f, g, F);
    return r.cap_sufficient && r.value == moyal(f, g, F.S);
  };
  s["cyclicity"] = [](RandomSource& rng, int N) {
    const auto S = SymplecticStructure::standard(1);
    const auto f = rng.formal_trig(2, N, 3, 3), g = rng.formal_trig(2, N, 3, 3);
    return cyclicity_defect(f, g, S, 1).is_zero();
  };
  s["graphs"] = [](RandomSource& rng, int) {
    const int l = rng.integer(0, 2);
    const auto rep = verify_locality_bound(1, l, 4);
    for (const auto& G : enumerate_admissible(1, l, 4)) {
      if (!admissible(G, 1) || hbar_order(G, 1) != l) return false;
    }
    return rep.ok && rep.max_yellow_valency <= l;
  };
  return s;
}

json trace_json(const TraceValue& t) { return io::to_json(t); }

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Deformation quantization toolkit: Moyal and Fedosov star products, semi-norms, traces"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  app.set_version_flag("--version", "deformq 0.1.0");

  Globals g;
  app.add_option("--omega", g.omega, "standard or a symplectic structure JSON file");
  app.add_option("--atlas", g.atlas, "flat, torus or an atlas JSON file");
  app.add_option("--N", g.N, "truncation order in hbar");
  app.add_option("--W", g.W, "Weyl weight cap");
  app.add_option("--tol", g.tol, "enclosure tolerance as p/q");
  app.add_option("--seed", g.seed, "seed for randomized suites");
  app.add_option("--budget-ms", g.budget_ms, "wall-clock budget for certified computations")->check(CLI::PositiveNumber);

  std::function<json(const Context&)> action;

  auto* star = app.add_subcommand("star", "Moyal product of two formal functions");
  std::string lhs, rhs;
  star->add_option("--lhs", lhs)->required();
  star->add_option("--rhs", rhs)->required();
  star->callback([&] {
    action = [&](const Context& c) {
      const auto f = c.formal(lhs);
      const auto h = c.formal(rhs, f[0].dim());
      auto p = moyal(f, h, c.omega(f[0].dim()));
      if (c.globals().N && *c.globals().N < p.order()) p = p.truncated(*c.globals().N);
      return io::to_json(p);
    };
  });

  auto* norm = app.add_subcommand("norm", "Certified semi-norm ||f||_{hbar,k}");
  std::string norm_f;
  int norm_k = 0;
  norm->add_option("--f", norm_f)->required();
  norm->add_option("--k", norm_k)->required()->check(CLI::NonNegativeNumber);
  norm->callback([&] {
    action = [&](const Context& c) {
      const auto f = c.formal(norm_f, std::nullopt, std::max(c.order_or(kDefaultOrder), norm_k));
      const auto s = formal_seminorms(f, norm_k, c.atlas(f[0].dim()), c.norms());
      json orders = json::array();
      for (const auto& e : s) orders.push_back(io::to_json(e));
      return json{{"k", norm_k}, {"seminorm", io::to_json(s.back())}, {"orders", orders}};
    };
  });

  auto* dist = app.add_subcommand("dist", "Certified Frechet distance");
  std::string dist_l, dist_r;
  int terms = 10;
  dist->add_option("--lhs", dist_l)->required();
  dist->add_option("--rhs", dist_r)->required();
  dist->add_option("--terms", terms)->check(CLI::NonNegativeNumber);
  dist->callback([&] {
    action = [&](const Context& c) {
      const auto f = c.formal(dist_l);
      const auto h = c.formal(dist_r, f[0].dim());
      const auto d = frechet_distance(f, h, c.atlas(f[0].dim()), terms, c.norms());
      return json{{"terms", terms}, {"distance", io::to_json(d)}};
    };
  });

  auto* flat = app.add_subcommand("flat-section", "Fedosov flat section O_f up to weight W");
  std::string flat_f, flat_conn = "flat";
  flat->add_option("--f", flat_f)->required();
  flat->add_option("--connection", flat_conn, "flat or a Fedosov data JSON file");
  flat->callback([&] {
    action = [&](const Context& c) {
      const auto f = c.formal(flat_f);
      const auto F = c.connection(flat_conn, f[0].dim());
      const WeylElement O = flat_section(f, F, c.globals().W);
      return json{{"W", c.globals().W},
                  {"section", io::to_json(O)},
                  {"symbol", io::to_json(symbol(O, f.order()))},
                  {"flat", check_flat(O, F).is_zero()}};
    };
  });

  auto* quant = app.add_subcommand("quantizable", "Bounded-weight test for the flat section");
  std::string quant_f, quant_conn = "flat";
  quant->add_option("--f", quant_f)->required();
  quant->add_option("--connection", quant_conn, "flat or a Fedosov data JSON file");
  quant->callback([&] {
    action = [&](const Context& c) {
      const auto f = c.formal(quant_f);
      const auto q = is_quantizable(f, c.connection(quant_conn, f[0].dim()), c.globals().W);
      json r = {{"quantizable", q.yes}, {"checked_up_to", q.checked_up_to}};
      if (q.yes) r["weight"] = q.weight;
      return r;
    };
  });

  auto* approx = app.add_subcommand("approx", "Quantum Weierstrass approximation on a box");
  std::string approx_f, approx_box, report, emit_q;
  std::optional<int> n_from;
  int max_degree = WeierstrassOptions{}.max_degree;
  approx->add_option("--f", approx_f)->required();
  approx->add_option("--box", approx_box, "box JSON file (default: unit cube)");
  approx->add_option("--N-from", n_from, "first order of a convergence report");
  approx->add_option("--report", report, "CSV path for the convergence report");
  approx->add_option("--emit", emit_q, "write the quantum polynomial JSON here");
  approx->add_option("--max-degree", max_degree)->check(CLI::PositiveNumber);
  approx->callback([&] {
    action = [&](const Context& c) -> json {
      const int N = c.order_or(3);
      const auto f = c.formal(approx_f, std::nullopt, N + 1);
      const int d = f[0].dim();
      const Box K = approx_box.empty() ? Box::cube(d, Rational(0), Rational(1))
                                       : from_file(approx_box, [](const json& j) { return io::box_from_json(j); });
      if (K.dim() != d) throw DimensionMismatch("box dimension differs from the function");
      WeierstrassOptions opt;
      opt.max_degree = max_degree;
      opt.budget = c.norms().budget;
      const auto S = c.omega(d);
      if (n_from || !report.empty()) {
        const auto rep = report_convergence(f, K, n_from.value_or(1), N, S, opt);
        if (!report.empty()) write_file(report, rep.csv());
        json rows = json::array();
        for (const auto& r : rep.rows) rows.push_back({{"N", r.N}, {"bound_hi", io::to_json(r.bound_hi)}, {"degree", r.degree}});
        if (!rep.monotone) throw std::logic_error("bound column is not strictly decreasing");
        return json{{"rows", rows}, {"monotone", rep.monotone}};
      }
      const auto r = quantum_weierstrass(f, K, N, S, opt);
      if (!emit_q.empty()) write_file(emit_q, io::to_json(r.p).dump() + "\n");
      return json{{"N", N},
                  {"bound", io::to_json(r.bound)},
                  {"guarantee", io::to_json(weierstrass_guarantee(N))},
                  {"degrees", r.degrees},
                  {"witness_terms", r.p.witness.size()}};
    };
  });

  auto* trace = app.add_subcommand("trace", "Renormalized trace on the torus");
  std::string trace_f;
  std::optional<int> trace_n;
  trace->add_option("--f", trace_f)->required();
  trace->add_option("--n", trace_n, "half the torus dimension");
  trace->callback([&] {
    action = [&](const Context& c) {
      const auto f = c.formal(trace_f);
      const auto S = c.omega(f[0].dim());
      return trace_json(renormalized_trace(f, S, trace_n.value_or(S.n())));
    };
  });

  auto* graphs = app.add_subcommand("graphs", "Admissible trace-density graphs");
  int gn = 1, gl = 0, cap = 4;
  std::size_t max_graphs = GraphBudget{}.max_graphs;
  std::string emit_g;
  graphs->add_option("--n", gn)->check(CLI::PositiveNumber);
  graphs->add_option("--l", gl)->check(CLI::NonNegativeNumber);
  graphs->add_option("--cap", cap)->check(CLI::NonNegativeNumber);
  graphs->add_option("--max-graphs", max_graphs);
  graphs->add_option("--emit", emit_g, "write the graphs JSON here");
  graphs->callback([&] {
    action = [&](const Context&) {
      const GraphBudget b{max_graphs};
      const auto list = enumerate_admissible(gn, gl, cap, b);
      const auto loc = verify_locality_bound(gn, gl, cap, b);
      if (!emit_g.empty()) {
        json all = json::array();
        for (const auto& G : list) all.push_back(io::to_json(G));
        write_file(emit_g, all.dump() + "\n");
      }
      return json{{"n", gn},
                  {"l", gl},
                  {"cap", cap},
                  {"count", list.size()},
                  {"labeled_count", labeled_admissible_count(gn, gl, cap)},
                  {"max_yellow_valency", loc.max_yellow_valency},
                  {"locality", loc.ok}};
    };
  });

  auto* check = app.add_subcommand("check", "Run a seeded invariant suite");
  std::string suite;
  int cases = 20;
  const auto all = suites();
  std::vector<std::string> names;
  for (const auto& [k, v] : all) names.push_back(k);
  check->add_option("--suite", suite)->required()->check(CLI::IsMember(names));
  check->add_option("--cases", cases)->check(CLI::PositiveNumber);
  check->callback([&] {
    action = [&](const Context& c) {
      const int N = c.order_or(3);
      json failures = json::array();
      const Case& body = all.at(suite);
      for (int i = 0; i < cases; ++i) {
        c.check_deadline();
        RandomSource rng(c.globals().seed * 1000003ULL + static_cast<std::uint64_t>(i));
        if (!body(rng, N)) failures.push_back(i);
      }
      return json{{"suite", suite},
                  {"seed", c.globals().seed},
                  {"N", N},
                  {"cases", cases},
                  {"passed", cases - static_cast<int>(failures.size())},
                  {"failures", failures}};
    };
  });

  auto report_error = [&](const char* kind, const std::string& message, int code, json extra = json::object()) {
    extra["error"] = kind;
    extra["message"] = message;
    err << extra.dump() << '\n';
    return code;
  };

  try {
    app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return ok;
  } catch (const CLI::CallForVersion&) {
    out << app.version() << '\n';
    return ok;
  } catch (const CLI::ParseError& e) {
    return report_error("usage", e.what(), invalid_input);
  }

  try {
    const Context ctx(g);
    const json result = action(ctx);
    out << result.dump() << '\n';
    if (result.contains("failures") && !result["failures"].empty()) return check_failed;
    return ok;
  } catch (const InputError& e) {
    return report_error("schema", e.what(), invalid_input, {{"file", e.file()}, {"path", e.path()}});
  } catch (const io::SchemaError& e) {
    return report_error("schema", e.what(), invalid_input, {{"path", e.path()}});
  } catch (const ValidationError& e) {
    return report_error("validation", e.what(), invalid_input);
  } catch (const UnrepresentableProduct& e) {
    return report_error("unrepresentable", e.what(), invalid_input);
  } catch (const BudgetExceeded& e) {
    return report_error("budget", e.what(), budget_exceeded);
  } catch (const std::logic_error& e) {
    return report_error("assertion", e.what(), check_failed);
  }
}

}  // namespace dq::cli
