#include "cli.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>

#include "ccl/experiments.hpp"
#include "ccl/io.hpp"
#include "ccl/render.hpp"

namespace ccl::cli {

namespace {

using nlohmann::json;

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError("'" + path + "' is not valid JSON: " + e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write '" + path + "'");
  f << text;
}

// A tree dump has "nodes"; anything else is taken as a polynomial.
LabelingState load_labeling(const json& j, int max_depth, double tol_scale) {
  if (j.is_object() && j.contains("nodes")) return labeling_from_json(j);
  return build_labeling(poly_from_json(j), max_depth, tol_scale);
}

std::vector<Point> read_points(const std::string& path, int dim) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::vector<Point> points;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    for (char& ch : line) {
      if (ch == ',' || ch == ';' || ch == '\t') ch = ' ';
    }
    std::istringstream ss(line);
    ss.imbue(std::locale::classic());
    std::string first;
    if (!(ss >> first) || first[0] == '#') continue;
    ss.clear();
    ss.seekg(0);
    Point x;
    double v;
    while (ss >> v) x.push_back(v);
    if (!ss.eof() || static_cast<int>(x.size()) != dim) {
      throw InputError("line " + std::to_string(lineno) + " of '" + path + "': expected " +
                       std::to_string(dim) + " numbers");
    }
    points.push_back(std::move(x));
  }
  return points;
}

std::string stats(const SubdivTree& tree) {
  std::ostringstream out;
  const std::size_t n = tree.leaf_count();
  out << n << (n == 1 ? " leaf, " : " leaves, ")
      << (tree.certified() ? "certified" : "not certified") << '\n';
  for (const LeafKind k : {LeafKind::UniformNeg, LeafKind::UniformPos,
                           LeafKind::MixedSimplyConnected, LeafKind::NotSimplyConnected}) {
    out << to_string(k) << ' ' << tree.leaf_count(k) << '\n';
  }
  std::map<int, std::size_t> hist;
  for (const std::int32_t i : tree.leaves()) ++hist[tree.node(i).depth];
  out << "depth histogram";
  for (const auto& [d, c] : hist) out << ' ' << d << ':' << c;
  out << '\n';
  if (tree.budget_exhausted) out << "node budget exhausted\n";
  return out.str();
}

struct Options {
  std::string input;
  std::string points;
  std::string out;
  int max_depth = 8;
  double tol_scale = Tolerance::kDefaultScale;
  std::optional<std::uint64_t> seed;
  std::optional<int> samples;
  std::optional<int> res;
  std::size_t node_budget = 0;
  bool no_tree = false;
  bool no_shade = false;
  bool no_contour = false;
};

int cmd_build(const Options& o, std::ostream& out) {
  const BernsteinPoly p = poly_from_json(read_json(o.input));
  LabelingState st =
      build_labeling(p, BuildOptions{o.max_depth, o.node_budget}, Tolerance::from_root(p, o.tol_scale));
  out << stats(st.tree);
  if (!o.out.empty()) write_text(o.out, labeling_to_json(st).dump(1) + "\n");
  return kOk;
}

int cmd_query(const Options& o, std::ostream& out) {
  LabelingState st = load_labeling(read_json(o.input), o.max_depth, o.tol_scale);
  const std::vector<Point> points = read_points(o.points, st.tree.dim());
  std::ostringstream csv;
  csv << "index,label,status\n";
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!contains(st.tree.domain(), points[i])) {
      throw InputError("point " + std::to_string(i) + " lies outside the domain");
    }
    try {
      const std::uint32_t label = label_of(st, points[i]);
      csv << i << ',' << label << ",ok\n";
    } catch (const ZeroSetError&) {
      csv << i << ",,on-zero-set\n";
    }
  }
  if (o.out.empty()) {
    out << csv.str();
  } else {
    write_text(o.out, csv.str());
  }
  return kOk;
}

int cmd_render(const Options& o, std::ostream& out) {
  LabelingState st = load_labeling(read_json(o.input), o.max_depth, o.tol_scale);
  if (st.tree.dim() != 2) throw InputError("render needs a 2D polynomial");
  RenderSpec spec;
  spec.res = o.res.value_or(spec.res);
  if (spec.res < 64) throw InputError("--res must be at least 64 for render");
  spec.palette_seed = o.seed.value_or(0);
  spec.tree_lines = !o.no_tree;
  spec.shade_uncertain = !o.no_shade;
  spec.contour = !o.no_contour;
  const std::string svg = render_svg(st, spec);
  if (o.out.empty()) {
    out << svg;
  } else {
    write_text(o.out, svg);
  }
  return kOk;
}

int cmd_sweep(const Options& o, std::ostream& out) {
  EnsembleConfig cfg = ensemble_from_json(read_json(o.input));
  if (o.seed) cfg.seed = *o.seed;
  if (o.samples) cfg.samples = *o.samples;
  if (o.res) cfg.gap_res = *o.res;
  cfg.tol_scale = o.tol_scale;
  cfg.validate();
  const SweepResult result = sweep(cfg);
  if (!o.out.empty()) {
    std::ofstream f(o.out, std::ios::binary);
    if (!f) throw InputError("cannot write '" + o.out + "'");
    write_csv(f, result);
  }
  write_summary(out, result);
  return kOk;
}

int cmd_verify(const Options& o, std::ostream& out) {
  LabelingState st = load_labeling(read_json(o.input), o.max_depth, o.tol_scale);
  OracleOptions opt;
  opt.res = o.res.value_or(st.tree.dim() == 2 ? 256 : 64);
  opt.max_res = st.tree.dim() == 2 ? 2048 : 128;
  opt.max_res = std::max(opt.max_res, opt.res);
  opt.samples = o.samples.value_or(opt.samples);
  opt.seed = o.seed.value_or(0);
  const Classification c = classify_against_oracle(st, opt);
  out << "outcome " << to_string(c.outcome) << '\n'
      << "certified " << (st.tree.certified() ? "true" : "false") << '\n'
      << "oracle_res " << c.oracle_res << '\n'
      << "points " << c.comparison.points_used << '\n'
      << "glued_groups " << c.comparison.glued_groups.size() << '\n';
  return kOk;
}

int cmd_corpus(const Options& o, std::ostream& out) {
  if (!o.out.empty()) std::filesystem::create_directories(o.out);
  bool all = true;
  out << std::left << std::setw(18) << "case" << std::setw(17) << "outcome" << std::setw(17)
      << "expected" << std::setw(8) << "neg" << std::setw(8) << "pos" << "uncertain_leaves\n";
  for (const RegressionCase& c : regression_corpus()) {
    const RegressionResult r = run_regression(c, o.samples.value_or(20000), o.seed.value_or(1));
    all = all && r.matches(c);
    out << std::setw(18) << c.name << std::setw(17) << to_string(r.outcome) << std::setw(17)
        << to_string(c.expected) << std::setw(8) << r.neg_labels << std::setw(8) << r.pos_labels
        << r.uncertain_leaves << (r.matches(c) ? "" : "  MISMATCH") << '\n';
    if (!o.out.empty()) {
      json j = poly_to_json(c.phi);
      write_text((std::filesystem::path(o.out) / (c.name + ".json")).string(), j.dump(1) + "\n");
    }
  }
  return all ? kOk : kInternalError;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Connected component labeling of polynomial-defined domains"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--max-depth", o.max_depth, "maximum subdivision depth")
        ->check(CLI::Range(0, 60));
    sub->add_option("--tol-scale", o.tol_scale, "tolerance scale relative to machine epsilon")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--out", o.out, "output file");
  };

  CLI::App* build = app.add_subcommand("build", "build the subdivision tree and labels");
  build->add_option("input", o.input, "polynomial JSON")->required();
  build->add_option("--node-budget", o.node_budget, "cap on the number of tree nodes");
  common(build);

  CLI::App* query = app.add_subcommand("query", "label points");
  query->add_option("input", o.input, "tree dump or polynomial JSON")->required();
  query->add_option("points", o.points, "one point per line")->required();
  common(query);

  CLI::App* render = app.add_subcommand("render", "draw a 2D labeling as SVG");
  render->add_option("input", o.input, "tree dump or polynomial JSON")->required();
  render->add_option("--res", o.res, "pixels along x");
  render->add_option("--seed", o.seed, "palette seed");
  render->add_flag("--no-tree", o.no_tree, "omit leaf outlines");
  render->add_flag("--no-shade", o.no_shade, "do not shade uncertain leaves");
  render->add_flag("--no-contour", o.no_contour, "omit the zero contour");
  common(render);

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "random ensemble statistics");
  sweep_cmd->add_option("input", o.input, "ensemble config JSON")->required();
  sweep_cmd->add_option("--seed", o.seed, "override the config seed");
  sweep_cmd->add_option("--samples", o.samples, "override points per comparison");
  sweep_cmd->add_option("--res", o.res, "override the gap grid resolution");
  common(sweep_cmd);

  CLI::App* verify = app.add_subcommand("verify", "compare a labeling with the grid oracle");
  verify->add_option("input", o.input, "tree dump or polynomial JSON")->required();
  verify->add_option("--res", o.res, "initial oracle resolution");
  verify->add_option("--samples", o.samples, "random comparison points");
  verify->add_option("--seed", o.seed, "sampling seed");
  common(verify);

  CLI::App* corpus = app.add_subcommand("corpus", "run the singular-geometry regression cases");
  corpus->add_option("--samples", o.samples, "random comparison points per case");
  corpus->add_option("--seed", o.seed, "sampling seed");
  corpus->add_option("--out", o.out, "directory for the case polynomials as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*build) return cmd_build(o, out);
    if (*query) return cmd_query(o, out);
    if (*render) return cmd_render(o, out);
    if (*sweep_cmd) return cmd_sweep(o, out);
    if (*verify) return cmd_verify(o, out);
    if (*corpus) return cmd_corpus(o, out);
  } catch (const BrokenComponentError& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternalError;
  } catch (const CertificationError& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternalError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kInputError;
}

}  // namespace ccl::cli
