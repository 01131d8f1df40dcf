#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "gtomo/born_inverse.hpp"
#include "gtomo/generators.hpp"
#include "gtomo/graph.hpp"
#include "gtomo/structured.hpp"

namespace gtomo {

/// Graph source for an experiment: a spec file or a generator.
struct GraphSource {
  std::optional<std::filesystem::path> file;
  // generator
  std::string kind;  // "lattice" or "path"
  int rows = 0, cols = 0;
  bool corners = false;
  int path_n = 0;
  bool both_ends = false;
};

/// Structure block of a config: resolved against the graph at run time.
struct StructureSpec {
  std::string kind;  // "support", "piecewise", "replication"
  std::vector<std::string> support;
  std::vector<std::vector<std::string>> cells;
};

/// A full experiment: problem, phantom, inversion settings, outputs.
struct ExperimentConfig {
  GraphSource graph;
  double alpha0 = 1.0;
  double robin_t = 0.0;
  std::vector<double> alphas;  // non-empty selects the multi-frequency path
  std::optional<StructureSpec> structure;
  PhantomSpec phantom;
  NormP norm_p = NormP::two;
  double lambda_reg = 0.0;
  int n_terms = 5;
  std::uint64_t seed = 0;
  std::filesystem::path out_dir = ".";
};

ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig read_config(const std::filesystem::path& path);

/// What run_experiment leaves behind, in memory and on disk.
struct ExperimentReport {
  Graph graph;
  Potential eta_true;
  ScatterVec phi;
  std::vector<Potential> eta_partial_sums;
  std::vector<double> term_norms;
  bool diverging = false;
  InverseDiagnostics diagnostics;
  std::vector<std::filesystem::path> files;
};

/// End-to-end pipeline: simulate data, reconstruct, write the report
/// bundle (data CSV, reconstruction CSV per partial sum, diagnostics JSON,
/// plot-ready long CSV). Stage failures propagate with a stage label.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

/// Loads the graph named by the config (file or generator).
Graph load_graph(const GraphSource& source);

/// Reads the phi column of a measurement CSV back into receiver-major order.
ScatterVec read_measurement_phi(const std::filesystem::path& path, const Graph& g);

}  // namespace gtomo
