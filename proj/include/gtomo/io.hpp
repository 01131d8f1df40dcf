#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "gtomo/born_forward.hpp"
#include "gtomo/born_inverse.hpp"
#include "gtomo/forward.hpp"
#include "gtomo/generators.hpp"
#include "gtomo/graph.hpp"

namespace gtomo::io {

/// Graph spec file schema: a JSON object with exactly the keys
///   interior, boundary, sources, receivers : arrays of string ids
///   edges : array of [id, id] pairs
/// Unknown keys are rejected.
GraphSpec graph_spec_from_json(const nlohmann::json& j);
GraphSpec read_graph_spec(const std::filesystem::path& path);
nlohmann::json graph_spec_to_json(const GraphSpec& spec);
void write_graph_spec(const std::filesystem::path& path, const GraphSpec& spec);

/// Potential CSV: header "vertex_id,value", one row per interior vertex.
void write_potential_csv(const std::filesystem::path& path, const Graph& g,
                         const Potential& eta);
Potential read_potential_csv(const std::filesystem::path& path, const Graph& g);

/// Measurement CSV: header "r,s,lambda,background,phi", receiver-major.
void write_measurement_csv(const std::filesystem::path& path, const Graph& g,
                           const Measurement& m);

/// Green's table CSV: header "row,col,value" over the full table.
void write_green_csv(const std::filesystem::path& path, const GreenTable& g0);

/// Reconstruction CSV: header "vertex_id,eta_true,eta_hat" (the eta_true
/// column is left empty when no reference potential is given).
void write_reconstruction_csv(const std::filesystem::path& path, const Graph& g,
                              const Potential& eta_hat,
                              const Potential* eta_true);

/// Plot-ready long format: header "term,vertex_id,value"; row (j, v) holds
/// the j-term partial sum at v.
void write_series_long_csv(const std::filesystem::path& path, const Graph& g,
                           const std::vector<Potential>& partial_sums);

/// Forward diagnostics report.
nlohmann::json forward_report(const SeriesConstants& c, double tail_bound_at_n,
                              int n_terms);

/// Inverse diagnostics report, including per-term norms when available.
nlohmann::json inverse_report(const InverseDiagnostics& d,
                              const std::vector<double>* term_norms);

void write_json(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json read_json(const std::filesystem::path& path);

}  // namespace gtomo::io
