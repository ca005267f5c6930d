#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "vinberg/decision.hpp"
#include "vinberg/limit_set.hpp"

namespace vinberg::io {

using Json = nlohmann::json;

/// Malformed input; `path` locates it ("line 3, column 7" or "cartan_matrix[1][2]").
class ParseError : public std::invalid_argument {
 public:
  ParseError(std::string path, const std::string& what)
      : std::invalid_argument(path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

/// Operation not available for this input, e.g. rendering with d != 2.
class Unsupported : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An input number: exact for integers and "p/q" strings, a double otherwise.
struct Number {
  std::optional<Rational> exact;
  double value = 0.0;

  Number() = default;
  Number(Rational q) : exact(q), value(q.convert_to<double>()) {}  // NOLINT
  Number(double x) : value(x) {}                                     // NOLINT
  bool operator==(const Number& o) const { return exact == o.exact && (exact || value == o.value); }
};

struct Generator {
  std::vector<Number> alpha, v;
  bool operator==(const Generator&) const = default;
};

struct InputDocument {
  enum class Kind { CoxeterMatrix, CartanMatrix, Generators };
  Kind kind = Kind::CartanMatrix;
  std::vector<std::vector<int>> coxeter;  ///< kInfiniteOrder for "inf"
  std::vector<std::vector<Number>> cartan;
  std::vector<Generator> generators;
  std::optional<Mode> mode;
  std::vector<std::string> labels;

  bool operator==(const InputDocument&) const = default;
  bool all_exact() const;
};

InputDocument parse(const std::string& text);
InputDocument parse_json(const Json& j);
Json serialize(const InputDocument& doc);

struct BuildOptions {
  std::optional<Mode> mode;  ///< overrides the document's mode
  double eps = kDefaultEps;
};

/// Routes the document through gram_matrix / tits_polytope / build_polytope.
CoxeterPolytope build(const InputDocument& doc, const BuildOptions& opts = {});
/// Cartan matrix only; throws InvalidCartan with every violation.
CartanMatrix build_cartan(const InputDocument& doc, const BuildOptions& opts = {});

/// Canonical text: sorted keys, floats rounded to 12 significant digits, 2-space indent.
std::string dump(const Json& j);
/// Value rounded to 12 significant digits; non-finite values become strings.
Json number(double x);

Json validation_report(const CartanMatrix& a);
Json validation_report(const InvalidCartan& e);
Json classification_report(const CoxeterPolytope& p);
Json faces_report(const CoxeterPolytope& p, int max_facets = kDefaultMaxFacets);
Json verdict_report(const Verdict& v);
Json volume_report(const VolumeSequence& seq, const VolumeProtocol& protocol);

struct SvgOptions {
  bool conic = true;  ///< overlay the invariant conic when one exists
};

/// Tiles of a d = 2 orbit in the witness chart on a 1000 x 1000 canvas. Depth counts go to
/// the metadata block; the fundamental tile has class "fundamental".
std::string render_tiling_svg(const OrbitTiling& tiling, const SvgOptions& opts = {});
std::string render_points_svg(const std::vector<VectorXd>& chart_points);

/// Header x,y[,z] then one line per point, 12 significant digits.
std::string points_csv(const std::vector<VectorXd>& chart_points);

/// Runs one CLI command. Exit codes: 0 success or Yes, 3 No, 2 input error, 1 internal error.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace vinberg::io
