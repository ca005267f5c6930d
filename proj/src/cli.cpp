#include <CLI11.hpp>

#include <fstream>
#include <ostream>
#include <sstream>

#include "vinberg/io.hpp"

namespace vinberg::io {

namespace {

constexpr int kExitYes = 0;
constexpr int kExitInternal = 1;
constexpr int kExitInput = 2;
constexpr int kExitNo = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path, "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError(path, "cannot write file");
  out << text;
}

struct Globals {
  std::string mode;
  double eps = kDefaultEps;
  int max_facets = kDefaultMaxFacets;

  BuildOptions build() const {
    BuildOptions o;
    o.eps = eps;
    if (mode == "exact") o.mode = Mode::Exact;
    if (mode == "approx") o.mode = Mode::Approx;
    return o;
  }
};

void emit(const Json& report, const std::string& out_path, std::ostream& out) {
  const std::string text = dump(report);
  if (out_path.empty()) out << text;
  else write_file(out_path, text);
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Coxeter polytopes, Vinberg domains and their Hilbert geometry", "vinberg_cli"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--mode", g.mode, "exact or approx")->check(CLI::IsMember({"exact", "approx"}))->envname("VINBERG_MODE");
  app.add_option("--eps", g.eps, "tolerance for approximate arithmetic")->check(CLI::PositiveNumber);
  app.add_option("--max-facets", g.max_facets, "cap on |S| for face enumeration")->check(CLI::Range(1, 30));

  std::string file, out_path, svg_path, question;
  int depth = 0, words = 12, count = 200;
  long samples = 1'000'000;
  std::uint64_t seed = 1;

  auto* validate = app.add_subcommand("validate", "Cartan validation report");
  auto* classify = app.add_subcommand("classify", "types, group class, components, representation");
  auto* faces = app.add_subcommand("faces", "face table");
  for (auto* sub : {validate, classify, faces}) {
    sub->add_option("file", file)->required();
    sub->add_option("--out", out_path);
  }
  auto* decide = app.add_subcommand("decide", "verdict with certificate; exit 0 = yes, 3 = no");
  decide->add_option("question", question)
      ->required()
      ->check(CLI::IsMember({"finite-volume", "unique-domain", "min-equals-vinberg", "limit-set-necessary"}));
  decide->add_option("file", file)->required();
  decide->add_option("--out", out_path);

  auto* volume = app.add_subcommand("volume", "volume estimates over depths 1..N");
  volume->add_option("file", file)->required();
  volume->add_option("--depth", depth)->required()->check(CLI::Range(1, 40));
  volume->add_option("--samples", samples)->check(CLI::PositiveNumber);
  volume->add_option("--seed", seed);
  volume->add_option("--out", out_path);

  auto* tile = app.add_subcommand("tile", "SVG of the orbit tiling (d = 2)");
  tile->add_option("file", file)->required();
  tile->add_option("--depth", depth)->required()->check(CLI::Range(0, 40));
  tile->add_option("--out", out_path)->required();

  auto* limit = app.add_subcommand("limit-set", "CSV of sampled limit points in the chart");
  limit->add_option("file", file)->required();
  limit->add_option("--words", words)->check(CLI::Range(1, 200));
  limit->add_option("--count", count)->check(CLI::Range(1, 1000000));
  limit->add_option("--seed", seed);
  limit->add_option("--out", out_path)->required();
  limit->add_option("--svg", svg_path);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kExitInput;
  }

  try {
    const InputDocument doc = parse(read_file(file));
    const BuildOptions opts = g.build();

    if (validate->parsed()) {
      try {
        emit(validation_report(build_cartan(doc, opts)), out_path, out);
      } catch (const InvalidCartan& e) {
        emit(validation_report(e), out_path, out);
        err << "error: " << e.what() << "\n";
        return kExitInput;
      }
      return 0;
    }
    const CoxeterPolytope p = build(doc, opts);
    if (classify->parsed()) {
      emit(classification_report(p), out_path, out);
      return 0;
    }
    if (faces->parsed()) {
      emit(faces_report(p, g.max_facets), out_path, out);
      return 0;
    }
    if (decide->parsed()) {
      Verdict v;
      if (question == "finite-volume") v = decide_finite_volume(p, g.max_facets);
      else if (question == "unique-domain") v = decide_unique_domain(p, g.max_facets);
      else if (question == "min-equals-vinberg") v = decide_min_domain_equals_vinberg(p, g.max_facets);
      else v = decide_limit_set_fills_boundary_necessary(p, g.max_facets);
      emit(verdict_report(v), out_path, out);
      return v.answer ? kExitYes : kExitNo;
    }
    if (volume->parsed()) {
      VolumeProtocol proto;
      proto.depths.clear();
      for (int n = 1; n <= depth; ++n) proto.depths.push_back(n);
      proto.samples = samples;
      proto.seed = seed;
      emit(volume_report(volume_sequence(p, proto), proto), out_path, out);
      return 0;
    }
    if (tile->parsed()) {
      write_file(out_path, render_tiling_svg(OrbitTiling(p, depth)));
      return 0;
    }
    if (limit->parsed()) {
      const LimitSetSample s = sample_limit_set(p, words, count, seed);
      const Chart chart = make_chart(p, polytope_rays(p));
      std::vector<VectorXd> pts;
      for (const auto& x : s.points) pts.push_back(chart.to_chart(x));
      write_file(out_path, points_csv(pts));
      if (!svg_path.empty()) write_file(svg_path, render_points_svg(pts));
      emit(Json{{"points", s.points.size()},
                {"words_tried", s.words_tried},
                {"word_length", s.word_length},
                {"count", s.count},
                {"seed", s.seed},
                {"diagnostic", s.diagnostic}},
           "", out);
      return 0;
    }
  } catch (const RouteDisagreement& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  } catch (const ConsistencyFailure& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  } catch (const std::invalid_argument& e) {
    // ParseError, InvalidCartan, PolytopeError, PreconditionError, NotNegativeType, Unsupported.
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}

}  // namespace vinberg::io
