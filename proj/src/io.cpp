#include "vinberg/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <regex>

#include "vinberg/geometry.hpp"
#include "vinberg/linalg.hpp"

namespace vinberg::io {

namespace {

std::string at(const std::string& base, std::size_t i) { return base + "[" + std::to_string(i) + "]"; }

Number parse_number(const Json& j, const std::string& path) {
  if (j.is_number_integer()) return Number(Rational(j.get<long long>()));
  if (j.is_number_unsigned()) return Number(Rational(j.get<unsigned long long>()));
  if (j.is_number_float()) return Number(j.get<double>());
  if (!j.is_string()) throw ParseError(path, "expected a number or a \"p/q\" string");
  const std::string s = j.get<std::string>();
  static const std::regex rational(R"(\s*[+-]?\d+(\s*/\s*[+-]?\d+)?\s*)");
  if (std::regex_match(s, rational)) {
    try {
      return Number(parse_rational(s));
    } catch (const std::exception& e) {
      throw ParseError(path, e.what());
    }
  }
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ParseError(path, "cannot read \"" + s + "\" as a number");
  }
  if (s.find_first_not_of(" \t", used) != std::string::npos || !std::isfinite(x))
    throw ParseError(path, "cannot read \"" + s + "\" as a number");
  return Number(x);
}

std::vector<Number> parse_vector(const Json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) throw ParseError(path, "expected a non-empty array");
  std::vector<Number> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(parse_number(j[i], at(path, i)));
  return out;
}

void require_square(const Json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) throw ParseError(path, "expected a non-empty array of rows");
  for (std::size_t i = 0; i < j.size(); ++i)
    if (!j[i].is_array() || j[i].size() != j.size())
      throw ParseError(at(path, i), "expected a row of length " + std::to_string(j.size()));
}

Json number_json(const Number& n) {
  if (!n.exact) return n.value;
  const Rational& q = *n.exact;
  if (denominator(q) == 1) {
    const auto num = numerator(q);
    if (boost::multiprecision::abs(num) < boost::multiprecision::mpz_int(1) << 62) return num.convert_to<long long>();
  }
  return to_string(q);
}

Json round_floats(const Json& j) {
  if (j.is_number_float()) return number(j.get<double>());
  if (j.is_array()) {
    Json out = Json::array();
    for (const auto& x : j) out.push_back(round_floats(x));
    return out;
  }
  if (j.is_object()) {
    Json out = Json::object();
    for (auto it = j.begin(); it != j.end(); ++it) out[it.key()] = round_floats(it.value());
    return out;
  }
  return j;
}

Mode effective_mode(const InputDocument& doc, const BuildOptions& opts) {
  if (opts.mode) return *opts.mode;
  if (doc.mode) return *doc.mode;
  return doc.all_exact() ? Mode::Exact : Mode::Approx;
}

Json one_based(const IndexSet& s) {
  Json out = Json::array();
  for (int i : s) out.push_back(i + 1);
  return out;
}

Json matrix_json(const MatrixXd& m) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(number(m(i, j)));
    out.push_back(row);
  }
  return out;
}

Json matrix_json(const MatrixQ& m) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(number_json(Number(m(i, j))));
    out.push_back(row);
  }
  return out;
}

Json vector_json(const VectorXd& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(number(v(i)));
  return out;
}

const char* violation_kind(CartanViolation::Kind k) {
  switch (k) {
    case CartanViolation::Kind::Shape: return "shape";
    case CartanViolation::Kind::Diagonal: return "diagonal";
    case CartanViolation::Kind::OffDiagonalSign: return "off_diagonal_sign";
    case CartanViolation::Kind::ZeroPattern: return "zero_pattern";
    case CartanViolation::Kind::Product: return "product";
  }
  return "?";
}

Json order_json(int m) { return m == kInfiniteOrder ? Json("inf") : Json(m); }

Json face_json(const FaceDescriptor& f) {
  return Json{{"facets", one_based(f.facets)}, {"dim", f.dim}, {"type", to_string(f.type.sign)}};
}

std::string fmt(double x, const char* format = "%.3f") {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, x);
  return buf;
}

std::string fmt12(double x) { return fmt(x, "%.12g"); }

/// Maps chart coordinates into the 1000 x 1000 canvas with a 20 pixel margin, y up.
struct Canvas {
  double xmin = 0, ymin = 0, scale = 1, ox = 20, oy = 20;

  explicit Canvas(const std::vector<geometry::Point2>& pts) {
    if (pts.empty()) return;
    double xmax = pts[0].x(), ymax = pts[0].y();
    xmin = xmax;
    ymin = ymax;
    for (const auto& p : pts) {
      xmin = std::min(xmin, p.x());
      xmax = std::max(xmax, p.x());
      ymin = std::min(ymin, p.y());
      ymax = std::max(ymax, p.y());
    }
    const double w = xmax - xmin, h = ymax - ymin;
    const double span = std::max({w, h, 1e-12});
    scale = 960.0 / span;
    ox = 20 + (960 - w * scale) / 2;
    oy = 20 + (960 - h * scale) / 2;
  }
  std::string point(const geometry::Point2& p) const {
    return fmt(ox + (p.x() - xmin) * scale) + " " + fmt(1000 - (oy + (p.y() - ymin) * scale));
  }
  std::string path(const std::vector<geometry::Point2>& poly) const {
    std::string d;
    for (std::size_t i = 0; i < poly.size(); ++i) d += (i == 0 ? "M " : " L ") + point(poly[i]);
    return d + " Z";
  }
};

const char* kSvgHeader =
    "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"1000\" height=\"1000\" viewBox=\"0 0 1000 1000\">\n";

/// Boundary of {u : lift(u)^T Q lift(u) < 0} in the chart, when it is an ellipse.
std::optional<std::vector<geometry::Point2>> conic_in_chart(const MatrixXd& q, const Chart& chart, int samples = 256) {
  const MatrixXd& b = chart.basis;
  const VectorXd& o = chart.origin;
  MatrixXd m = b.transpose() * q * b;
  VectorXd lin = b.transpose() * q * o;
  double c0 = o.dot(q * o);
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(m);
  if (es.eigenvalues().minCoeff() <= 0) {
    if (es.eigenvalues().maxCoeff() >= 0) return std::nullopt;
    m = -m;
    lin = -lin;
    c0 = -c0;
  }
  const VectorXd center = -m.ldlt().solve(lin);
  const double level = c0 + lin.dot(center);
  if (level >= 0) return std::nullopt;
  std::vector<geometry::Point2> pts;
  for (int k = 0; k < samples; ++k) {
    const double t = 2.0 * std::numbers::pi * k / samples;
    const Eigen::Vector2d dir(std::cos(t), std::sin(t));
    const double r = std::sqrt(-level / dir.dot(m * dir));
    pts.push_back(center.head<2>() + r * dir);
  }
  return pts;
}

}  // namespace

bool InputDocument::all_exact() const {
  for (const auto& row : cartan)
    for (const auto& x : row)
      if (!x.exact) return false;
  for (const auto& g : generators) {
    for (const auto& x : g.alpha)
      if (!x.exact) return false;
    for (const auto& x : g.v)
      if (!x.exact) return false;
  }
  return true;
}

InputDocument parse(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError("line " + std::to_string(line) + ", column " + std::to_string(col), "invalid JSON");
  }
  return parse_json(j);
}

InputDocument parse_json(const Json& j) {
  if (!j.is_object()) throw ParseError("$", "expected a JSON object");
  InputDocument doc;
  int variants = 0;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& key = it.key();
    if (key == "coxeter_matrix" || key == "cartan_matrix" || key == "generators") {
      ++variants;
    } else if (key != "mode" && key != "labels") {
      throw ParseError(key, "unknown field");
    }
  }
  if (variants != 1) throw ParseError("$", "expected exactly one of coxeter_matrix, cartan_matrix, generators");

  std::size_t n = 0;
  if (j.contains("coxeter_matrix")) {
    doc.kind = InputDocument::Kind::CoxeterMatrix;
    const Json& m = j["coxeter_matrix"];
    require_square(m, "coxeter_matrix");
    n = m.size();
    for (std::size_t r = 0; r < n; ++r) {
      std::vector<int> row;
      for (std::size_t c = 0; c < n; ++c) {
        const Json& x = m[r][c];
        const std::string path = at(at("coxeter_matrix", r), c);
        if (x.is_string() && x.get<std::string>() == "inf") {
          row.push_back(kInfiniteOrder);
        } else if (x.is_number_integer() && x.get<long long>() >= 1 && x.get<long long>() < kInfiniteOrder) {
          row.push_back(x.get<int>());
        } else {
          throw ParseError(path, "expected a positive integer order or \"inf\"");
        }
      }
      doc.coxeter.push_back(std::move(row));
    }
  } else if (j.contains("cartan_matrix")) {
    doc.kind = InputDocument::Kind::CartanMatrix;
    const Json& m = j["cartan_matrix"];
    require_square(m, "cartan_matrix");
    n = m.size();
    for (std::size_t r = 0; r < n; ++r) doc.cartan.push_back(parse_vector(m[r], at("cartan_matrix", r)));
  } else {
    doc.kind = InputDocument::Kind::Generators;
    const Json& g = j["generators"];
    if (!g.is_array() || g.empty()) throw ParseError("generators", "expected a non-empty array");
    n = g.size();
    for (std::size_t s = 0; s < n; ++s) {
      const std::string path = at("generators", s);
      if (!g[s].is_object() || !g[s].contains("alpha") || !g[s].contains("v") || g[s].size() != 2)
        throw ParseError(path, "expected an object with fields alpha and v");
      Generator gen{parse_vector(g[s]["alpha"], path + ".alpha"), parse_vector(g[s]["v"], path + ".v")};
      const std::size_t dim = doc.generators.empty() ? gen.alpha.size() : doc.generators[0].alpha.size();
      if (gen.alpha.size() != dim) throw ParseError(path + ".alpha", "expected " + std::to_string(dim) + " entries");
      if (gen.v.size() != dim) throw ParseError(path + ".v", "expected " + std::to_string(dim) + " entries");
      doc.generators.push_back(std::move(gen));
    }
  }

  if (j.contains("mode")) {
    const Json& m = j["mode"];
    if (m == "exact") doc.mode = Mode::Exact;
    else if (m == "approx") doc.mode = Mode::Approx;
    else throw ParseError("mode", "expected \"exact\" or \"approx\"");
  }
  if (j.contains("labels")) {
    const Json& l = j["labels"];
    if (!l.is_array() || l.size() != n) throw ParseError("labels", "expected " + std::to_string(n) + " strings");
    for (std::size_t i = 0; i < n; ++i) {
      if (!l[i].is_string()) throw ParseError(at("labels", i), "expected a string");
      doc.labels.push_back(l[i].get<std::string>());
    }
  }
  return doc;
}

Json serialize(const InputDocument& doc) {
  Json j = Json::object();
  switch (doc.kind) {
    case InputDocument::Kind::CoxeterMatrix: {
      Json m = Json::array();
      for (const auto& row : doc.coxeter) {
        Json r = Json::array();
        for (int x : row) r.push_back(order_json(x));
        m.push_back(r);
      }
      j["coxeter_matrix"] = m;
      break;
    }
    case InputDocument::Kind::CartanMatrix: {
      Json m = Json::array();
      for (const auto& row : doc.cartan) {
        Json r = Json::array();
        for (const auto& x : row) r.push_back(number_json(x));
        m.push_back(r);
      }
      j["cartan_matrix"] = m;
      break;
    }
    case InputDocument::Kind::Generators: {
      Json g = Json::array();
      for (const auto& gen : doc.generators) {
        Json a = Json::array(), v = Json::array();
        for (const auto& x : gen.alpha) a.push_back(number_json(x));
        for (const auto& x : gen.v) v.push_back(number_json(x));
        g.push_back(Json{{"alpha", a}, {"v", v}});
      }
      j["generators"] = g;
      break;
    }
  }
  if (doc.mode) j["mode"] = to_string(*doc.mode);
  if (!doc.labels.empty()) j["labels"] = doc.labels;
  return j;
}

CartanMatrix build_cartan(const InputDocument& doc, const BuildOptions& opts) {
  const Mode mode = effective_mode(doc, opts);
  switch (doc.kind) {
    case InputDocument::Kind::CoxeterMatrix: {
      std::optional<CoxeterMatrix> m;
      try {
        m.emplace(doc.coxeter);
      } catch (const std::invalid_argument& e) {
        throw ParseError("coxeter_matrix", e.what());
      }
      CartanMatrix g = gram_matrix(*m, opts.eps);
      if (mode == Mode::Approx && g.exact()) return CartanMatrix::validate(g.exact_entries(), Mode::Approx, opts.eps);
      const bool exact_requested = opts.mode ? *opts.mode == Mode::Exact : doc.mode == Mode::Exact;
      if (exact_requested && !g.exact())
        throw ParseError("coxeter_matrix", "orders other than 2, 3 and inf have irrational Gram entries; use approx mode");
      return g;
    }
    case InputDocument::Kind::CartanMatrix: {
      const auto n = static_cast<Eigen::Index>(doc.cartan.size());
      if (doc.all_exact()) {
        MatrixQ a(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
          for (Eigen::Index k = 0; k < n; ++k) a(i, k) = *doc.cartan[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)].exact;
        return CartanMatrix::validate(a, mode, opts.eps);
      }
      if (mode == Mode::Exact) throw ParseError("cartan_matrix", "decimal entries cannot be used in exact mode");
      MatrixXd a(n, n);
      for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index k = 0; k < n; ++k) a(i, k) = doc.cartan[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)].value;
      return CartanMatrix::validate(a, opts.eps);
    }
    case InputDocument::Kind::Generators:
      return build(doc, opts).cartan();
  }
  throw ParseError("$", "unknown document kind");
}

CoxeterPolytope build(const InputDocument& doc, const BuildOptions& opts) {
  if (doc.kind != InputDocument::Kind::Generators) return tits_polytope(build_cartan(doc, opts));
  const Mode mode = effective_mode(doc, opts);
  const auto n = static_cast<Eigen::Index>(doc.generators.size());
  const auto dim = static_cast<Eigen::Index>(doc.generators[0].alpha.size());
  if (doc.all_exact()) {
    MatrixQ alpha(n, dim), v(dim, n);
    for (Eigen::Index s = 0; s < n; ++s)
      for (Eigen::Index i = 0; i < dim; ++i) {
        alpha(s, i) = *doc.generators[static_cast<std::size_t>(s)].alpha[static_cast<std::size_t>(i)].exact;
        v(i, s) = *doc.generators[static_cast<std::size_t>(s)].v[static_cast<std::size_t>(i)].exact;
      }
    return build_polytope(alpha, v, mode, opts.eps);
  }
  if (mode == Mode::Exact) throw ParseError("generators", "decimal entries cannot be used in exact mode");
  MatrixXd alpha(n, dim), v(dim, n);
  for (Eigen::Index s = 0; s < n; ++s)
    for (Eigen::Index i = 0; i < dim; ++i) {
      alpha(s, i) = doc.generators[static_cast<std::size_t>(s)].alpha[static_cast<std::size_t>(i)].value;
      v(i, s) = doc.generators[static_cast<std::size_t>(s)].v[static_cast<std::size_t>(i)].value;
    }
  return build_polytope(alpha, v, opts.eps);
}

Json number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return std::strtod(fmt12(x).c_str(), nullptr);
}

std::string dump(const Json& j) { return round_floats(j).dump(2) + "\n"; }

Json validation_report(const CartanMatrix& a) {
  Json orders = Json::array();
  for (int s = 0; s < a.size(); ++s) {
    Json row = Json::array();
    for (int t = 0; t < a.size(); ++t) row.push_back(order_json(a.order(s, t)));
    orders.push_back(row);
  }
  Json j{{"valid", true},
         {"mode", to_string(a.mode())},
         {"size", a.size()},
         {"symmetric", a.symmetric()},
         {"orders", orders},
         {"max_product_residual", number(a.max_product_residual())},
         {"violations", Json::array()}};
  j["entries"] = a.exact() ? matrix_json(a.exact_entries()) : matrix_json(a.entries());
  return j;
}

Json validation_report(const InvalidCartan& e) {
  Json v = Json::array();
  for (const auto& x : e.violations()) {
    Json item{{"kind", violation_kind(x.kind)}, {"message", x.message}};
    if (x.row >= 0) item["row"] = x.row + 1;
    if (x.col >= 0) item["col"] = x.col + 1;
    v.push_back(item);
  }
  return Json{{"valid", false}, {"violations", v}};
}

Json classification_report(const CoxeterPolytope& p) {
  const TypeTag t = classify_type(p.cartan());
  Json blocks = Json::array();
  for (const auto& b : t.blocks)
    blocks.push_back(Json{{"facets", one_based(b.indices)},
                          {"type", to_string(b.sign)},
                          {"lambda", number(b.lambda)},
                          {"uncertainty", number(b.uncertainty)},
                          {"warning", b.warning}});
  const GroupClass g = classify_group(coxeter_from_cartan(p.cartan()), p.eps());
  Json comps = Json::array(), kinds = Json::array();
  for (std::size_t i = 0; i < g.components.size(); ++i) {
    comps.push_back(one_based(g.components[i]));
    kinds.push_back(to_string(g.component_kinds[i]));
  }
  const RepresentationReport r = representation_report(p);
  Json j{{"dimension", p.dim()},
         {"generators", p.size()},
         {"mode", to_string(p.mode())},
         {"type",
          {{"sign", to_string(t.sign)}, {"margin", number(t.margin)}, {"warning", t.warning}, {"blocks", blocks}}},
         {"group", {{"kind", to_string(g.kind)}, {"components", comps}, {"component_kinds", kinds}, {"warning", g.warning}}},
         {"representation",
          {{"v_alpha_dim", r.v_alpha_dim},
           {"v_v_dim", r.v_v_dim},
           {"cartan_rank", r.cartan_rank},
           {"reduced", r.reduced},
           {"dual_reduced", r.dual_reduced},
           {"irreducible", r.irreducible}}}};
  Json irr = Json::array();
  for (const auto& c : irreducible_components(p.cartan())) irr.push_back(one_based(c));
  j["irreducible_components"] = irr;
  if (t.sign == TypeSign::Positive || t.sign == TypeSign::Zero || t.sign == TypeSign::Negative) {
    const WitnessVector w = witness_vector(p.cartan());
    j["witness"] = Json{{"x", vector_json(w.x)}, {"margin", number(w.margin)}, {"warning", w.warning}};
  }
  return j;
}

Json faces_report(const CoxeterPolytope& p, int max_facets) {
  const auto faces = enumerate_faces(p, max_facets);
  Json list = Json::array();
  std::vector<int> fvec(static_cast<std::size_t>(p.dim() + 1), 0);
  for (const auto& f : faces) {
    const FaceClass c = classify_face(p, f);
    Json item = face_json(f);
    item["class"] = to_string(c);
    item["parabolic"] = c.parabolic;
    item["loxodromic"] = c.loxodromic;
    item["cartan_rank"] = c.cartan_rank;
    item["margin"] = number(f.margin);
    list.push_back(item);
    if (f.dim >= 0 && f.dim <= p.dim()) ++fvec[static_cast<std::size_t>(f.dim)];
  }
  return Json{{"dimension", p.dim()}, {"faces", list}, {"f_vector", fvec}};
}

Json verdict_report(const Verdict& v) {
  Json routes = Json::array();
  for (const auto& r : v.routes) routes.push_back(Json{{"name", r.name}, {"answer", r.answer ? "yes" : "no"}});
  Json cert = Json::object();
  if (v.offending_vertex) cert["offending_vertex"] = face_json(*v.offending_vertex);
  if (v.negative_face) cert["negative_face"] = face_json(*v.negative_face);
  if (v.rank)
    cert["rank"] = Json{{"irreducible", v.rank->irreducible},
                        {"cartan_rank", v.rank->cartan_rank},
                        {"expected", v.rank->expected}};
  if (!v.factors.empty()) {
    Json fs = Json::array();
    for (const auto& f : v.factors) {
      Json item{{"facets", one_based(f.facets)}, {"negative_type", f.negative_type}, {"quasiperfect", f.quasiperfect}};
      if (f.offending_vertex) item["offending_vertex"] = face_json(*f.offending_vertex);
      fs.push_back(item);
    }
    cert["factors"] = fs;
  }
  if (v.group_kind) cert["group_kind"] = to_string(*v.group_kind);
  Json j{{"question", to_string(v.question)},
         {"answer", v.answer ? "yes" : "no"},
         {"routes", routes},
         {"routes_agree", v.routes_agree},
         {"certificate", cert},
         {"notes", v.notes}};
  if (v.evidence) {
    Json e{{"depths", v.evidence->depths},
           {"values", Json::array()},
           {"std_errors", Json::array()},
           {"increasing", v.evidence->increasing}};
    for (double x : v.evidence->values) e["values"].push_back(number(x));
    for (double x : v.evidence->std_errors) e["std_errors"].push_back(number(x));
    j["evidence"] = e;
  }
  return j;
}

Json volume_report(const VolumeSequence& seq, const VolumeProtocol& protocol) {
  Json est = Json::array();
  for (const auto& e : seq.volumes.estimates)
    est.push_back(Json{{"depth", e.depth},
                       {"value", number(e.value)},
                       {"std_error", number(e.std_error)},
                       {"samples", e.samples},
                       {"seed", e.seed},
                       {"resampled", e.resampled}});
  Json diffs = Json::array();
  for (std::size_t k = 0; k < seq.volumes.diff.size(); ++k)
    diffs.push_back(Json{{"from", seq.depths[k]},
                         {"to", seq.depths[k + 1]},
                         {"diff", number(seq.volumes.diff[k])},
                         {"std_error", number(seq.volumes.diff_se[k])}});
  return Json{{"protocol",
               {{"depths", protocol.depths},
                {"samples", protocol.samples},
                {"seed", protocol.seed},
                {"radius_per_depth", number(protocol.radius_per_depth)},
                {"use_quadric", protocol.use_quadric}}},
              {"quadric_used", seq.quadric_used},
              {"estimates", est},
              {"differences", diffs}};
}

std::string render_tiling_svg(const OrbitTiling& tiling, const SvgOptions& opts) {
  const CoxeterPolytope& p = tiling.polytope();
  if (p.dim() != 2) throw Unsupported("SVG rendering needs d = 2, got d = " + std::to_string(p.dim()));
  const DomainApprox dom = domain_approx(tiling);
  std::vector<VectorXd> all;
  for (const auto& t : dom.tile_vertices)
    for (Eigen::Index c = 0; c < t.cols(); ++c) all.push_back(t.col(c));
  const Chart chart = make_chart(p, all);

  std::vector<std::vector<geometry::Point2>> tiles;
  std::vector<geometry::Point2> every;
  for (const auto& t : dom.tile_vertices) {
    std::vector<geometry::Point2> pts;
    for (Eigen::Index c = 0; c < t.cols(); ++c) pts.push_back(chart.to_chart(t.col(c)).head<2>());
    tiles.push_back(geometry::convex_hull_2d(pts));
    every.insert(every.end(), pts.begin(), pts.end());
  }
  std::optional<std::vector<geometry::Point2>> conic;
  if (opts.conic && dom.quadric) conic = conic_in_chart(*dom.quadric, chart);
  if (conic) every.insert(every.end(), conic->begin(), conic->end());
  const Canvas canvas(every);

  const int depth = tiling.depth();
  Json meta{{"depth", depth}, {"tiles_per_depth", tiling.level_sizes()}, {"conic", conic.has_value()}};
  Json cumulative = Json::array();
  int total = 0;
  for (int c : tiling.level_sizes()) cumulative.push_back(total += c);
  meta["tiles_up_to_depth"] = cumulative;

  std::string svg = kSvgHeader;
  svg += "<metadata>" + meta.dump() + "</metadata>\n<style>\n";
  svg += ".tile{stroke:#333333;stroke-width:0.5}\n";
  for (int k = 0; k <= depth; ++k) {
    const int g = 235 - static_cast<int>(std::lround(150.0 * k / std::max(depth, 1)));
    svg += ".depth-" + std::to_string(k) + "{fill:rgb(" + std::to_string(g) + "," + std::to_string(g) + "," +
           std::to_string(std::min(255, g + 15)) + ")}\n";
  }
  svg += ".fundamental{fill:#d62728}\n.conic{fill:none;stroke:#1f77b4;stroke-width:1.5}\n</style>\n";
  const auto& elems = tiling.elements();
  for (std::size_t i = elems.size(); i-- > 1;)
    svg += "<path class=\"tile depth-" + std::to_string(elems[i].depth) + "\" d=\"" + canvas.path(tiles[i]) + "\"/>\n";
  svg += "<path class=\"tile fundamental\" d=\"" + canvas.path(tiles[0]) + "\"/>\n";
  if (conic) svg += "<path class=\"conic\" d=\"" + canvas.path(*conic) + "\"/>\n";
  svg += "</svg>\n";
  return svg;
}

std::string render_points_svg(const std::vector<VectorXd>& chart_points) {
  std::vector<geometry::Point2> pts;
  for (const auto& x : chart_points) {
    if (x.size() != 2) throw Unsupported("SVG rendering needs d = 2, got d = " + std::to_string(x.size()));
    pts.push_back(x.head<2>());
  }
  const Canvas canvas(pts);
  std::string svg = kSvgHeader;
  svg += "<metadata>" + Json{{"points", pts.size()}}.dump() + "</metadata>\n";
  svg += "<style>\n.point{fill:#1f77b4}\n</style>\n";
  for (const auto& p : pts) {
    const std::string xy = canvas.point(p);
    const auto space = xy.find(' ');
    svg += "<circle class=\"point\" cx=\"" + xy.substr(0, space) + "\" cy=\"" + xy.substr(space + 1) + "\" r=\"2\"/>\n";
  }
  svg += "</svg>\n";
  return svg;
}

std::string points_csv(const std::vector<VectorXd>& chart_points) {
  static const char* names[] = {"x", "y", "z"};
  const Eigen::Index d = chart_points.empty() ? 2 : chart_points[0].size();
  if (d < 1 || d > 3) throw Unsupported("CSV export needs chart dimension 1 to 3");
  std::string out;
  for (Eigen::Index i = 0; i < d; ++i) out += std::string(i ? "," : "") + names[i];
  out += "\n";
  for (const auto& x : chart_points) {
    for (Eigen::Index i = 0; i < d; ++i) out += (i ? "," : "") + fmt12(x(i));
    out += "\n";
  }
  return out;
}

}  // namespace vinberg::io
