#pragma once

#include <string>

#include "json.hpp"

#include "germrenorm/amplitude.hpp"
#include "germrenorm/graph.hpp"
#include "germrenorm/renorm.hpp"

namespace germrenorm {

using Json = nlohmann::json;

/// Parse failures and missing files raise InputError.
Json read_json_file(const std::string& path);
Json parse_json_text(const std::string& text);

struct GraphInput {
  FeynmanGraph graph;
  std::vector<int> labels;     // empty when absent
  std::vector<double> lengths;  // empty when absent
};

GraphInput parse_graph(const Json& j);
FlatGeometry parse_geometry(const Json& j);
/// A list of terms, or {"terms": [...]}; width may be a number or one per point.
TestFunction parse_testfn(const Json& j, int d, int n);

Json to_json(const LinearForm& f);
LinearForm linear_form_from_json(const Json& j);
Json to_json(const Jet& jet);
Jet jet_from_json(const Json& j, int nvars);
Json to_json(const MeromorphicGerm& g);
MeromorphicGerm germ_from_json(const Json& j);

Json to_json(const DivergenceReport& r, const FeynmanGraph& g);
Json to_json(const SectorChart& c);
Json to_json(const AmplitudeGermResult& r);
Json to_json(const RenormResult& r);
Json to_json(const CheckReport& r);

}  // namespace germrenorm
