#include "germrenorm/corpus.hpp"

#include "germrenorm/errors.hpp"

#include <chrono>
#include <filesystem>

namespace germrenorm {

namespace fs = std::filesystem;

AmplitudeConfig amplitude_config_from_json(const Json& j, AmplitudeConfig c) {
  if (!j.is_object()) throw InputError("config must be an object");
  c.quad.t_nodes = j.value("t_nodes", c.quad.t_nodes);
  c.quad.tau_nodes = j.value("tau_nodes", c.quad.tau_nodes);
  c.order = j.value("order", c.order);
  c.heat_order = j.value("heat_order", c.heat_order);
  return c;
}

std::vector<CorpusEntry> run_corpus(const std::string& dir_name, const CorpusOptions& opt) {
  const fs::path dir(dir_name);
  const Json manifest = read_json_file((dir / "manifest.json").string());
  if (!manifest.contains("checks") || !manifest["checks"].is_array())
    throw InputError("manifest needs a list of checks");
  const AmplitudeConfig base = amplitude_config_from_json(manifest.value("config", Json::object()));
  const std::string default_geom = manifest.value("geometry", std::string("geometry.json"));

  auto path = [&](const Json& c, const char* key) {
    if (!c.contains(key)) throw InputError(std::string("manifest check lacks '") + key + "'");
    return (dir / c[key].get<std::string>()).string();
  };
  auto geometry = [&](const Json& c) {
    Json j = read_json_file((dir / c.value("geometry", default_geom)).string());
    if (opt.dim > 0) j["dim"] = opt.dim;
    if (opt.mass >= 0) j["mass"] = opt.mass;
    return parse_geometry(j);
  };

  std::vector<CorpusEntry> out;
  for (const auto& c : manifest["checks"]) {
    const auto start = std::chrono::steady_clock::now();
    const std::string kind = c.at("check").get<std::string>();
    const std::string graph_file = c.at("graph").get<std::string>();
    const GraphInput g = parse_graph(read_json_file(path(c, "graph")));
    const FlatGeometry geom = geometry(c);
    AmplitudeConfig cfg = amplitude_config_from_json(c.value("config", Json::object()), base);
    if (opt.adjust) opt.adjust(cfg);
    double tol = opt.tolerance > 0 ? opt.tolerance : c.value("tolerance", -1.0);
    auto or_default = [&](double t) { return tol > 0 ? tol : t; };

    std::vector<CheckReport> reports;
    if (kind == "extension" || kind == "translation" || kind == "compatibility") {
      const TestFunction phi = parse_testfn(read_json_file(path(c, "testfn")), geom.dim(), g.graph.num_vertices());
      if (kind == "extension") reports.push_back(check_extension(g.graph, phi, geom, cfg, or_default(1e-4)));
      if (kind == "translation")
        reports.push_back(
            check_translation(g.graph, phi, c.at("shift").get<std::vector<double>>(), geom, cfg, or_default(1e-4)));
      if (kind == "compatibility") reports = check_compatibility(g.graph, phi, geom, cfg);
    } else if (kind == "locality") {
      const auto inside = c.at("inside").get<std::vector<int>>();
      const int nu = static_cast<int>(inside.size());
      const TestFunction pu = parse_testfn(read_json_file(path(c, "testfn_u")), geom.dim(), nu);
      const TestFunction pv =
          parse_testfn(read_json_file(path(c, "testfn_v")), geom.dim(), g.graph.num_vertices() - nu);
      reports.push_back(check_locality(g.graph, inside, pu, pv, geom, cfg, or_default(1e-3)));
    } else {
      throw InputError("unknown check '" + kind + "'");
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (opt.progress) opt.progress(kind, graph_file, secs);
    for (auto& r : reports) out.push_back({kind, graph_file, std::move(r), secs / reports.size()});
  }
  return out;
}

}  // namespace germrenorm
