#include "gtomo/io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include <nlohmann/json.hpp>

namespace gtomo::io {

namespace {

using nlohmann::json;

std::vector<std::string> string_list(const json& j, const std::string& key) {
  if (!j.contains(key))
    throw ValidationError(ValidationError::Code::bad_schema,
                          "graph spec is missing key '" + key + "'");
  const json& arr = j.at(key);
  if (!arr.is_array())
    throw ValidationError(ValidationError::Code::bad_schema,
                          "graph spec key '" + key + "' must be an array");
  std::vector<std::string> out;
  for (const auto& item : arr) {
    if (!item.is_string())
      throw ValidationError(ValidationError::Code::bad_schema,
                            "entries of '" + key + "' must be strings");
    out.push_back(item.get<std::string>());
  }
  return out;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out)
    throw ValidationError(ValidationError::Code::bad_schema,
                          "cannot open '" + path.string() + "' for writing");
  out << std::setprecision(17);
  return out;
}

const char* norm_name(NormP p) {
  switch (p) {
    case NormP::one: return "1";
    case NormP::two: return "2";
    case NormP::inf: return "inf";
  }
  return "2";
}

}  // namespace

GraphSpec graph_spec_from_json(const json& j) {
  if (!j.is_object())
    throw ValidationError(ValidationError::Code::bad_schema,
                          "graph spec must be a JSON object");
  static const std::vector<std::string> known = {"interior", "boundary", "edges",
                                                 "sources", "receivers"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find(known.begin(), known.end(), it.key()) == known.end())
      throw ValidationError(ValidationError::Code::bad_schema,
                            "graph spec has unknown key '" + it.key() + "'");
  }
  GraphSpec spec;
  spec.interior = string_list(j, "interior");
  spec.boundary = string_list(j, "boundary");
  spec.sources = string_list(j, "sources");
  spec.receivers = string_list(j, "receivers");

  if (!j.contains("edges") || !j.at("edges").is_array())
    throw ValidationError(ValidationError::Code::bad_schema,
                          "graph spec key 'edges' must be an array of pairs");
  for (const auto& e : j.at("edges")) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_string())
      throw ValidationError(ValidationError::Code::bad_schema,
                            "each edge must be a pair of vertex ids");
    spec.edges.emplace_back(e[0].get<std::string>(), e[1].get<std::string>());
  }
  return spec;
}

GraphSpec read_graph_spec(const std::filesystem::path& path) {
  return graph_spec_from_json(read_json(path));
}

json graph_spec_to_json(const GraphSpec& spec) {
  json j;
  j["interior"] = spec.interior;
  j["boundary"] = spec.boundary;
  json edges = json::array();
  for (const auto& [a, b] : spec.edges) edges.push_back(json::array({a, b}));
  j["edges"] = edges;
  j["sources"] = spec.sources;
  j["receivers"] = spec.receivers;
  return j;
}

void write_graph_spec(const std::filesystem::path& path, const GraphSpec& spec) {
  write_json(path, graph_spec_to_json(spec));
}

void write_potential_csv(const std::filesystem::path& path, const Graph& g,
                         const Potential& eta) {
  if (eta.size() != static_cast<Eigen::Index>(g.n_interior()))
    throw ValidationError(ValidationError::Code::shape_mismatch,
                          "potential length does not match interior size");
  auto out = open_out(path);
  out << "vertex_id,value\n";
  for (std::size_t v = 0; v < g.n_interior(); ++v)
    out << g.interior_ids()[v] << ',' << eta(v) << '\n';
}

Potential read_potential_csv(const std::filesystem::path& path, const Graph& g) {
  std::ifstream in(path);
  if (!in)
    throw ValidationError(ValidationError::Code::bad_schema,
                          "cannot open '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line) || line.rfind("vertex_id,value", 0) != 0)
    throw ValidationError(ValidationError::Code::bad_schema,
                          "potential CSV must start with 'vertex_id,value'");
  Potential eta = Potential::Zero(g.n_interior());
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto comma = line.find(',');
    if (comma == std::string::npos)
      throw ValidationError(ValidationError::Code::bad_schema,
                            "malformed potential row: " + line);
    std::string id = line.substr(0, comma);
    double value = std::stod(line.substr(comma + 1));
    int idx = g.index_of(id);
    if (!g.is_interior(idx))
      throw ValidationError(ValidationError::Code::bad_schema,
                            "potential CSV names non-interior vertex '" + id + "'");
    eta(idx) = value;
  }
  return eta;
}

void write_measurement_csv(const std::filesystem::path& path, const Graph& g,
                           const Measurement& m) {
  auto out = open_out(path);
  out << "r,s,lambda,background,phi\n";
  const auto& receivers = g.receivers();
  const auto& sources = g.sources();
  for (std::size_t r = 0; r < receivers.size(); ++r)
    for (std::size_t s = 0; s < sources.size(); ++s)
      out << g.boundary_ids()[receivers[r]] << ',' << g.boundary_ids()[sources[s]]
          << ',' << m.lambda(r, s) << ',' << m.background(r, s) << ','
          << m.background(r, s) - m.lambda(r, s) << '\n';
}

void write_green_csv(const std::filesystem::path& path, const GreenTable& g0) {
  auto out = open_out(path);
  out << "row,col,value\n";
  const Matrix& g = g0.full();
  for (Eigen::Index r = 0; r < g.rows(); ++r)
    for (Eigen::Index c = 0; c < g.cols(); ++c)
      out << r << ',' << c << ',' << g(r, c) << '\n';
}

void write_reconstruction_csv(const std::filesystem::path& path, const Graph& g,
                              const Potential& eta_hat,
                              const Potential* eta_true) {
  auto out = open_out(path);
  out << "vertex_id,eta_true,eta_hat\n";
  for (std::size_t v = 0; v < g.n_interior(); ++v) {
    out << g.interior_ids()[v] << ',';
    if (eta_true) out << (*eta_true)(v);
    out << ',' << eta_hat(v) << '\n';
  }
}

void write_series_long_csv(const std::filesystem::path& path, const Graph& g,
                           const std::vector<Potential>& partial_sums) {
  auto out = open_out(path);
  out << "term,vertex_id,value\n";
  for (std::size_t j = 0; j < partial_sums.size(); ++j)
    for (std::size_t v = 0; v < g.n_interior(); ++v)
      out << j + 1 << ',' << g.interior_ids()[v] << ',' << partial_sums[j](v)
          << '\n';
}

json forward_report(const SeriesConstants& c, double tail_bound_at_n,
                    int n_terms) {
  json j;
  j["p"] = norm_name(c.norm_p);
  j["nu_p"] = c.nu;
  j["mu_p"] = c.mu;
  j["C_green_q"] = c.c_green_q;
  j["n_terms"] = n_terms;
  if (std::isfinite(tail_bound_at_n))
    j["tail_bound_at_N"] = tail_bound_at_n;
  else
    j["tail_bound_at_N"] = "inf";
  return j;
}

json inverse_report(const InverseDiagnostics& d,
                    const std::vector<double>* term_norms) {
  json j;
  j["p"] = norm_name(d.constants.norm_p);
  j["nu_p"] = d.constants.nu;
  j["mu_p"] = d.constants.mu;
  j["C_green_q"] = d.constants.c_green_q;
  j["C_p"] = d.c_p;
  j["C_p_exact"] = d.c_p_exact;
  j["invertible"] = d.invertible;
  j["r_p"] = d.r_p;
  j["r_p_asymptotic"] = d.r_p_asymptotic;
  j["data_side_bound"] = d.data_side_bound;
  if (std::isfinite(d.k1pinv_norm))
    j["k1pinv_norm"] = d.k1pinv_norm;
  else
    j["k1pinv_norm"] = "inf";
  if (d.data_norm) j["data_norm"] = *d.data_norm;
  if (d.k1phi_norm) j["k1phi_norm"] = *d.k1phi_norm;
  if (d.m_lipschitz) j["M_lipschitz"] = *d.m_lipschitz;
  if (d.tau_star_value) j["tau_star"] = *d.tau_star_value;
  if (d.a) j["a"] = *d.a;
  if (d.c_na) j["C_Na"] = *d.c_na;
  if (term_norms) j["term_norms"] = *term_norms;
  return j;
}

void write_json(const std::filesystem::path& path, const json& j) {
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw ValidationError(ValidationError::Code::bad_schema,
                          "cannot open '" + path.string() + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ValidationError(ValidationError::Code::bad_schema,
                          "invalid JSON in '" + path.string() + "': " + e.what());
  }
  return j;
}

}  // namespace gtomo::io
