#pragma once

#include <functional>
#include <string>
#include <vector>

#include "germrenorm/io.hpp"

namespace germrenorm {

struct CorpusOptions {
  int dim = 0;            // > 0 overrides every geometry file
  double mass = -1;       // >= 0 overrides every geometry file
  double tolerance = -1;  // > 0 overrides every check
  std::function<void(AmplitudeConfig&)> adjust;  // applied after the manifest config
  std::function<void(const std::string& kind, const std::string& graph, double seconds)> progress;
};

struct CorpusEntry {
  std::string kind, graph;
  CheckReport report;
  double seconds = 0;
};

/// Reads {"config", "geometry", "checks"} fields; a check may carry its own "config".
AmplitudeConfig amplitude_config_from_json(const Json& j, AmplitudeConfig base = {});

/// Runs every check listed in dir/manifest.json.
std::vector<CorpusEntry> run_corpus(const std::string& dir, const CorpusOptions& opt = {});

}  // namespace germrenorm
