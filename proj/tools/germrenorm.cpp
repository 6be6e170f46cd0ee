#include <cstdio>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"

#include "germrenorm/corpus.hpp"
#include "germrenorm/errors.hpp"
#include "germrenorm/io.hpp"

using namespace germrenorm;

namespace {

struct Options {
  std::string graph, testfn, geometry, corpus, germ_file;
  int dim = 0;
  double mass = -1;
  int order = -1;
  int quad_nodes = 0;
  long mc_samples = 0;
  long seed = -1;
  int jobs = 1;
  double tolerance = -1;
  std::string output;
  std::vector<double> lengths;
  bool labelled = false;
  std::vector<double> from, to;
  int steps = 50;
};

void emit(const Options& o, const std::string& text) {
  if (o.output.empty()) {
    std::cout << text << "\n";
    return;
  }
  std::ofstream out(o.output);
  if (!out) throw InputError("cannot write '" + o.output + "'");
  out << text << "\n";
}

// command-line flags win over the given config
AmplitudeConfig amplitude_config(const Options& o, AmplitudeConfig c = {}) {
  if (o.order >= 0) c.order = o.order;
  if (o.quad_nodes > 0) c.quad.t_nodes = o.quad_nodes;
  if (o.mc_samples > 0) c.quad.mc_samples = o.mc_samples;
  if (o.seed >= 0) c.quad.seed = static_cast<uint64_t>(o.seed);
  c.quad.jobs = std::max(1, o.jobs);
  return c;
}

FlatGeometry load_geometry(const Options& o, const std::string& path) {
  Json j = read_json_file(path);
  if (o.dim > 0) j["dim"] = o.dim;
  if (o.mass >= 0) j["mass"] = o.mass;
  return parse_geometry(j);
}

void check_quad_error(const Options& o, double err) {
  if (o.tolerance > 0 && err > o.tolerance)
    throw NumericalError("quadrature error estimate " + std::to_string(err) + " exceeds tolerance " +
                         std::to_string(o.tolerance));
}

int cmd_poles(const Options& o) {
  const GraphInput g = parse_graph(read_json_file(o.graph));
  if (o.dim <= 0) throw InputError("--dim is required");
  emit(o, to_json(divergent_subgraphs(g.graph, o.dim), g.graph).dump(2));
  return 0;
}

int cmd_tree(const Options& o) {
  GraphInput g = parse_graph(read_json_file(o.graph));
  if (!o.lengths.empty()) g.lengths = o.lengths;
  if (g.lengths.empty()) throw InputError("edge lengths required (--lengths or \"lengths\" in the graph file)");
  const SpanningForestResult r = kruskal_tree({g.graph, g.lengths});
  Json tree = Json::array(), cycles = Json::object();
  for (int e : r.tree_edges) tree.push_back(e + 1);
  for (int e = 0; e < g.graph.num_edges(); ++e) {
    if (std::binary_search(r.tree_edges.begin(), r.tree_edges.end(), e)) continue;
    Json path = Json::array();
    for (const auto& se : fundamental_cycle(g.graph, r.tree_edges, e)) path.push_back(se.sign * (se.edge + 1));
    cycles[std::to_string(e + 1)] = path;
  }
  emit(o, Json{{"tree", tree}, {"cycles", cycles}, {"trace_spanning", r.per_step_trace_ok}}.dump(2));
  return 0;
}

int cmd_sectors(const Options& o) {
  const GraphInput g = parse_graph(read_json_file(o.graph));
  if (o.dim <= 0) throw InputError("--dim is required");
  if (g.graph.num_edges() > 7) throw ResourceCapError("sector listing is capped at 7 edges");
  std::vector<int> labels = g.labels.empty() ? std::vector<int>(g.graph.num_edges(), 0) : g.labels;
  Json charts = Json::array();
  for_each_permutation(g.graph.num_edges(), [&](const std::vector<int>& perm) {
    charts.push_back(to_json(make_chart({g.graph, labels}, perm, o.dim)));
  });
  emit(o, Json{{"sectors", charts}}.dump(2));
  return 0;
}

int cmd_germ(const Options& o) {
  const GraphInput g = parse_graph(read_json_file(o.graph));
  const FlatGeometry geom = load_geometry(o, o.geometry);
  const TestFunction phi = parse_testfn(read_json_file(o.testfn), geom.dim(), g.graph.num_vertices());
  const AmplitudeConfig cfg = amplitude_config(o);
  AmplitudeGermResult r;
  if (o.labelled) {
    std::vector<int> labels = g.labels.empty() ? std::vector<int>(g.graph.num_edges(), 0) : g.labels;
    r = labelled_amplitude_germ({g.graph, labels}, phi, geom, cfg.quad, cfg.order);
  } else {
    r = assemble_full_amplitude(g.graph, phi, geom, cfg);
  }
  Json j = to_json(r);
  j["seed"] = cfg.quad.seed;
  emit(o, j.dump(2));
  check_quad_error(o, r.quad_error);
  return 0;
}

int cmd_renormalize(const Options& o) {
  const GraphInput g = parse_graph(read_json_file(o.graph));
  const FlatGeometry geom = load_geometry(o, o.geometry);
  const TestFunction phi = parse_testfn(read_json_file(o.testfn), geom.dim(), g.graph.num_vertices());
  const AmplitudeConfig cfg = amplitude_config(o);
  const RenormResult r = renormalize(g.graph, phi, geom, cfg);
  Json j = to_json(r);
  j["seed"] = cfg.quad.seed;
  emit(o, j.dump(2));
  check_quad_error(o, r.quad_error);
  return 0;
}

int cmd_slice(const Options& o) {
  const MeromorphicGerm g = germ_from_json(read_json_file(o.germ_file));
  if (static_cast<int>(o.from.size()) != g.dim || static_cast<int>(o.to.size()) != g.dim)
    throw InputError("--from and --to need one entry per germ variable");
  if (o.steps < 1) throw InputError("--steps must be positive");
  std::string csv = "tau,re,im\n";
  for (int i = 0; i <= o.steps; ++i) {
    const double tau = static_cast<double>(i) / o.steps;
    std::vector<double> s(g.dim);
    for (int k = 0; k < g.dim; ++k) s[k] = (1 - tau) * o.from[k] + tau * o.to[k];
    const cplx v = g.evaluate(s);
    char line[96];
    std::snprintf(line, sizeof line, "%.6f,%.17g,%.17g\n", tau, v.real(), v.imag());
    csv += line;
  }
  emit(o, csv.substr(0, csv.size() - 1));
  return 0;
}

int cmd_verify(const Options& o) {
  CorpusOptions opt;
  opt.dim = o.dim;
  opt.mass = o.mass;
  opt.tolerance = o.tolerance;
  opt.adjust = [&](AmplitudeConfig& c) { c = amplitude_config(o, c); };
  Json reports = Json::array();
  bool all = true;
  for (const auto& e : run_corpus(o.corpus, opt)) {
    Json j = to_json(e.report);
    j["graph"] = e.graph;
    j["seconds"] = e.seconds;
    all = all && e.report.pass;
    reports.push_back(j);
  }
  emit(o, Json{{"checks", reports}, {"all_pass", all}}.dump(2));
  return all ? 0 : 5;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Regularized Feynman amplitudes as meromorphic germs, and their renormalization"};
  app.require_subcommand(1);
  Options o;
  auto common = [&](CLI::App* c) {
    c->add_option("--dim", o.dim, "Space dimension (overrides the geometry file)");
    c->add_option("--mass", o.mass, "Mass (overrides the geometry file)");
    c->add_option("--order", o.order, "sigma-jet order D");
    c->add_option("--quad-nodes", o.quad_nodes, "tanh-sinh nodes per cube axis");
    c->add_option("--mc-samples", o.mc_samples, "Monte Carlo samples for high-dimensional chi");
    c->add_option("--seed", o.seed, "Monte Carlo seed");
    c->add_option("--jobs", o.jobs, "Worker threads");
    c->add_option("--tolerance", o.tolerance, "Fail when the error estimate exceeds this");
    c->add_option("--output", o.output, "Write the report here instead of stdout");
  };
  auto* poles = app.add_subcommand("poles", "Predicted pole hyperplanes");
  poles->add_option("graph", o.graph)->required();
  auto* tree = app.add_subcommand("tree", "Kruskal sector tree for edge lengths");
  tree->add_option("graph", o.graph)->required();
  tree->add_option("--lengths", o.lengths)->delimiter(',');
  auto* sectors = app.add_subcommand("sectors", "Blow-up charts of every sector");
  sectors->add_option("graph", o.graph)->required();
  auto* germ = app.add_subcommand("germ", "Amplitude germ at s = (1,...,1)");
  germ->add_option("graph", o.graph)->required();
  germ->add_option("testfn", o.testfn)->required();
  germ->add_option("geometry", o.geometry)->required();
  germ->add_flag("--labelled", o.labelled, "Labelled amplitude with the graph's labels, no tails");
  auto* renorm = app.add_subcommand("renormalize", "Renormalized pairing");
  renorm->add_option("graph", o.graph)->required();
  renorm->add_option("testfn", o.testfn)->required();
  renorm->add_option("geometry", o.geometry)->required();
  auto* verify = app.add_subcommand("verify", "Run the functional-equation checks of a corpus");
  verify->add_option("corpus", o.corpus)->required();
  auto* slice = app.add_subcommand("slice", "CSV of a germ along a segment in sigma-space");
  slice->add_option("germ", o.germ_file)->required();
  slice->add_option("--from", o.from)->delimiter(',')->required();
  slice->add_option("--to", o.to)->delimiter(',')->required();
  slice->add_option("--steps", o.steps);
  for (auto* c : {poles, tree, sectors, germ, renorm, verify, slice}) common(c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  try {
    if (*poles) return cmd_poles(o);
    if (*tree) return cmd_tree(o);
    if (*sectors) return cmd_sectors(o);
    if (*germ) return cmd_germ(o);
    if (*renorm) return cmd_renormalize(o);
    if (*verify) return cmd_verify(o);
    if (*slice) return cmd_slice(o);
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const PreconditionError& e) {
    std::cerr << "precondition violated: " << e.what() << "\n";
    return 3;
  } catch (const ResourceCapError& e) {
    std::cerr << "resource cap: " << e.what() << "\n";
    return 4;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 5;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 5;
  }
  return 0;
}
