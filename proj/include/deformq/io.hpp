#pragma once

// JSON forms of every value type. Parsers validate structure and report the
// JSON pointer of the first offending element.

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "deformq/approx.hpp"
#include "deformq/bvgraphs.hpp"
#include "deformq/fedosov.hpp"
#include "deformq/frechet.hpp"
#include "deformq/trace.hpp"

namespace dq::io {

using nlohmann::json;

class SchemaError : public ValidationError {
 public:
  SchemaError(std::string path, const std::string& message)
      : ValidationError(path + ": " + message), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

/// Parses text, throwing SchemaError at "" on syntax errors.
json parse(const std::string& text);
json read_file(const std::string& path);

json to_json(const Rational& q);
Rational rational_from_json(const json& j, const std::string& path = "");

json to_json(const PolyRep& p);
json to_json(const TrigRep& t);
json to_json(const SmoothRep& f);
SmoothRep smooth_from_json(const json& j, const std::string& path = "", std::optional<int> dim = std::nullopt);

json to_json(const FormalFunction& f);
/// Accepts {"N", "coeffs"} or a bare function (lifted to order default_N).
FormalFunction formal_from_json(const json& j, const std::string& path = "", std::optional<int> dim = std::nullopt,
                                std::optional<int> default_N = std::nullopt);

json to_json(const Enclosure& e);
Enclosure enclosure_from_json(const json& j, const std::string& path = "");

json to_json(const Value& v);

json to_json(const Box& b);
Box box_from_json(const json& j, const std::string& path = "");

json to_json(const Atlas& a);
Atlas atlas_from_json(const json& j, const std::string& path = "");

json to_json(const SymplecticStructure& S);
/// {"lower": matrix} or {"standard": n}.
SymplecticStructure symplectic_from_json(const json& j, const std::string& path = "");

json to_json(const WeylElement& a);
WeylElement weyl_from_json(const json& j, const std::string& path = "");

json to_json(const FedosovData& F);
FedosovData fedosov_from_json(const json& j, const std::string& path = "");

json to_json(const QuantumPolynomial& q);
QuantumPolynomial quantum_from_json(const json& j, const std::string& path = "");

json to_json(const TraceValue& t);
TraceValue trace_from_json(const json& j, const std::string& path = "");

json to_json(const LabeledGraph& G);
LabeledGraph graph_from_json(const json& j, const std::string& path = "");

}  // namespace dq::io
