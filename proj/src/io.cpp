#include "germrenorm/io.hpp"

#include "germrenorm/errors.hpp"

#include <fstream>
#include <sstream>

namespace germrenorm {

namespace {

template <class T>
T field(const Json& j, const char* key) {
  if (!j.contains(key)) throw InputError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw InputError(std::string("field '") + key + "': " + e.what());
  }
}

std::string exps_key(const std::vector<int>& a) {
  std::string s = "[";
  for (size_t i = 0; i < a.size(); ++i) s += (i ? "," : "") + std::to_string(a[i]);
  return s + "]";
}

std::vector<int> parse_exps(const std::string& key, size_t expect) {
  std::vector<int> a;
  try {
    a = Json::parse(key).get<std::vector<int>>();
  } catch (const Json::exception&) {
    throw InputError("malformed exponent key '" + key + "'");
  }
  if (a.size() != expect)
    throw InputError("exponent key '" + key + "' needs " + std::to_string(expect) + " entries");
  for (int x : a)
    if (x < 0) throw InputError("negative exponent in '" + key + "'");
  return a;
}

Json complex_json(cplx z) { return Json::array({z.real(), z.imag()}); }

}  // namespace

Json parse_json_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return Json::parse(ss.str());
  } catch (const Json::parse_error& e) {
    throw InputError("malformed JSON in '" + path + "': " + e.what());
  }
}

GraphInput parse_graph(const Json& j) {
  if (!j.is_object()) throw InputError("graph JSON must be an object");
  GraphInput in;
  const auto ids = field<std::vector<int>>(j, "vertices");
  const auto edges = field<std::vector<std::vector<int>>>(j, "edges");
  std::vector<std::pair<int, int>> pairs;
  for (const auto& e : edges) {
    if (e.size() != 2) throw InputError("each edge needs two endpoints");
    pairs.push_back({e[0], e[1]});
  }
  in.graph = FeynmanGraph(ids, pairs);
  if (j.contains("labels") && !j["labels"].is_null()) {
    in.labels = field<std::vector<int>>(j, "labels");
    if (in.labels.size() != pairs.size()) throw InputError("one label per edge required");
    for (int k : in.labels)
      if (k < 0) throw InputError("labels must be non-negative");
  }
  if (j.contains("lengths") && !j["lengths"].is_null()) {
    in.lengths = field<std::vector<double>>(j, "lengths");
    if (in.lengths.size() != pairs.size()) throw InputError("one length per edge required");
  }
  return in;
}

FlatGeometry parse_geometry(const Json& j) {
  if (!j.is_object()) throw InputError("geometry JSON must be an object");
  const std::string type = j.value("type", std::string("flat"));
  if (type != "flat") throw PreconditionError("geometry type '" + type + "' has no backend (only 'flat')");
  const int d = field<int>(j, "dim");
  if (d < 1) throw InputError("dimension must be positive");
  const double m = j.contains("mass") ? field<double>(j, "mass") : 0.0;
  if (m < 0) throw InputError("mass must be non-negative");
  std::optional<Eigen::MatrixXd> metric;
  if (j.contains("metric") && !j["metric"].is_null()) {
    const auto rows = field<std::vector<std::vector<double>>>(j, "metric");
    if (static_cast<int>(rows.size()) != d) throw InputError("metric must be d x d");
    Eigen::MatrixXd g(d, d);
    for (int a = 0; a < d; ++a) {
      if (static_cast<int>(rows[a].size()) != d) throw InputError("metric must be d x d");
      for (int b = 0; b < d; ++b) g(a, b) = rows[a][b];
    }
    metric = g;
  }
  return FlatGeometry(d, m, metric);
}

TestFunction parse_testfn(const Json& j, int d, int n) {
  const Json& list = j.is_object() && j.contains("terms") ? j["terms"] : j;
  if (!list.is_array()) throw InputError("test function JSON must be a list of terms");
  std::vector<GaussianTerm> terms;
  for (const auto& t : list) {
    GaussianTerm g;
    g.center = field<std::vector<double>>(t, "center");
    if (static_cast<int>(g.center.size()) != d * n)
      throw InputError("center needs d*n = " + std::to_string(d * n) + " entries");
    if (!t.contains("width")) throw InputError("missing field 'width'");
    if (t["width"].is_number()) g.width.assign(n, t["width"].get<double>());
    else g.width = field<std::vector<double>>(t, "width");
    if (static_cast<int>(g.width.size()) != n) throw InputError("width needs one entry per point");
    for (double w : g.width)
      if (!(w > 0)) throw InputError("widths must be positive");
    if (t.contains("poly")) {
      for (const auto& [key, c] : t["poly"].items()) {
        if (!c.is_number()) throw InputError("polynomial coefficients must be numbers");
        g.poly[parse_exps(key, d * n)] += c.get<double>();
      }
    } else {
      g.poly[Monomial(d * n, 0)] = 1.0;
    }
    terms.push_back(std::move(g));
  }
  return TestFunction(d, n, terms);
}

Json to_json(const LinearForm& f) {
  Json a = Json::array();
  for (int i = 0; i < f.dim(); ++i) a.push_back(rational_to_string(f[i]));
  return a;
}

LinearForm linear_form_from_json(const Json& j) {
  std::vector<Rational> c;
  for (const auto& x : j) c.push_back(parse_rational(x.get<std::string>()));
  return LinearForm(c);
}

Json to_json(const Jet& jet) {
  Json c = Json::object();
  for (int i = 0; i < jet.size(); ++i)
    if (jet[i] != 0.0) c[exps_key(jet.table().exponents(i))] = complex_json(jet[i]);
  return {{"order", jet.order()}, {"coeffs", c}};
}

Jet jet_from_json(const Json& j, int nvars) {
  Jet jet(nvars, field<int>(j, "order"));
  for (const auto& [key, v] : j.at("coeffs").items()) {
    const auto a = parse_exps(key, nvars);
    jet.set(a, cplx(v.at(0).get<double>(), v.at(1).get<double>()));
  }
  return jet;
}

Json to_json(const MeromorphicGerm& g) {
  Json polar = Json::array();
  for (const auto& t : g.polar) {
    Json dens = Json::array(), ell = Json::array();
    for (const auto& d : t.dens) dens.push_back({{"coeffs", to_json(d.form)}, {"mult", d.mult}});
    for (const auto& f : t.ell) ell.push_back(to_json(f));
    polar.push_back({{"dens", dens}, {"ell", ell}, {"num", to_json(t.num)}});
  }
  return {{"dim", g.dim}, {"base", g.base()}, {"polar", polar}, {"holo", to_json(g.holo)}};
}

MeromorphicGerm germ_from_json(const Json& j) {
  try {
    const int p = field<int>(j, "dim");
    MeromorphicGerm g(p, 0);
    g.holo = jet_from_json(j.at("holo"), p);
    for (const auto& t : j.at("polar")) {
      PolarTerm pt;
      for (const auto& d : t.at("dens")) pt.dens.push_back({linear_form_from_json(d.at("coeffs")), d.at("mult").get<int>()});
      for (const auto& f : t.at("ell")) pt.ell.push_back(linear_form_from_json(f));
      pt.num = jet_from_json(t.at("num"), static_cast<int>(pt.ell.size()));
      g.polar.push_back(std::move(pt));
    }
    return g;
  } catch (const Json::exception& e) {
    throw InputError(std::string("malformed germ JSON: ") + e.what());
  }
}

Json to_json(const DivergenceReport& r, const FeynmanGraph&) {
  Json hs = Json::array();
  for (size_t i = 0; i < r.divergent_subgraphs.size(); ++i) {
    Json edges = Json::array();
    for (int e : r.divergent_subgraphs[i]) edges.push_back(e + 1);
    hs.push_back({{"edges", edges},
                  {"rhs", static_cast<int>(r.divergent_subgraphs[i].size())},
                  {"form", to_json(r.hyperplanes[i])}});
  }
  return {{"hyperplanes", hs}, {"order_bound", r.order_bound}};
}

Json to_json(const SectorChart& c) {
  Json perm = Json::array(), tree = Json::array(), cycles = Json::object(), exps = Json::array();
  for (int e : c.perm) perm.push_back(e + 1);
  for (int e : c.tree_edges) tree.push_back(e + 1);
  for (const auto& [e, cyc] : c.cycles) {
    Json path = Json::array();
    for (const auto& se : cyc) path.push_back(se.sign * (se.edge + 1));
    cycles[std::to_string(e + 1)] = path;
  }
  for (int s = 0; s < c.num_edges(); ++s)
    exps.push_back({{"slot", s + 1}, {"form", to_json(c.lambda[s])}, {"offset", c.c0[s]}, {"b1", c.betti_prefix[s]}});
  return {{"order", perm}, {"tree", tree}, {"cycles", cycles}, {"exponents", exps}, {"ibp_depths", required_ibp_depths(c)}};
}

Json to_json(const AmplitudeGermResult& r) {
  Json j = to_json(r.germ);
  Json poles = Json::array();
  for (const auto& f : r.realized_poles) poles.push_back(to_json(f));
  j["realized_poles"] = poles;
  j["quad_error"] = r.quad_error;
  j["sectors"] = r.sectors;
  return j;
}

Json to_json(const RenormResult& r) {
  Json poles = Json::array();
  for (const auto& f : r.realized_poles) poles.push_back(to_json(f));
  return {{"value", complex_json(r.value)}, {"quad_error", r.quad_error}, {"sectors", r.sectors},
          {"realized_poles", poles}, {"holo_jet", to_json(r.holo_jet)}, {"germ", to_json(r.germ)}};
}

Json to_json(const CheckReport& r) {
  Json j = {{"name", r.name},           {"lhs", r.lhs},     {"rhs", r.rhs},
            {"discrepancy", r.discrepancy}, {"tolerance", r.tolerance}, {"quad_error", r.quad_error},
            {"pass", r.pass}};
  if (!r.warning.empty()) j["warning"] = r.warning;
  return j;
}

}  // namespace germrenorm
