#include "gtomo/experiment.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "gtomo/io.hpp"

namespace gtomo {

namespace {

using nlohmann::json;

[[noreturn]] void rethrow_with_stage(const std::string& stage) {
  try {
    throw;
  } catch (const ValidationError& e) {
    throw ValidationError(e.code(), "[" + stage + "] " + e.what());
  } catch (const NumericError& e) {
    throw NumericError("[" + stage + "] " + e.what());
  }
}

template <typename F>
auto stage(const std::string& name, F&& f) {
  try {
    return f();
  } catch (...) {
    rethrow_with_stage(name);
  }
}

NormP norm_from_json(const json& v) {
  if (v.is_number_integer()) {
    int p = v.get<int>();
    if (p == 1) return NormP::one;
    if (p == 2) return NormP::two;
  } else if (v.is_string()) {
    std::string s = v.get<std::string>();
    if (s == "1") return NormP::one;
    if (s == "2") return NormP::two;
    if (s == "inf") return NormP::inf;
  }
  throw ValidationError(ValidationError::Code::bad_schema,
                        "norm p must be 1, 2 or \"inf\"");
}

PhantomSpec phantom_from_json(const json& j, std::uint64_t default_seed) {
  PhantomSpec spec;
  std::string kind = j.value("kind", "explicit");
  if (kind == "inclusions") {
    spec.kind = PhantomSpec::Kind::inclusions;
    spec.count = j.value("count", 1);
    spec.amplitude = j.value("amplitude", 0.0);
    spec.seed = j.value("seed", default_seed);
  } else if (kind == "explicit") {
    spec.kind = PhantomSpec::Kind::explicit_values;
    if (j.contains("values")) {
      for (auto it = j.at("values").begin(); it != j.at("values").end(); ++it)
        spec.values[it.key()] = it.value().get<double>();
    }
  } else {
    throw ValidationError(ValidationError::Code::bad_schema,
                          "phantom kind must be 'inclusions' or 'explicit'");
  }
  return spec;
}

StructureMap resolve_structure(const StructureSpec& s, const Graph& g) {
  if (s.kind == "support") return support_restriction_map(g, s.support);
  if (s.kind == "piecewise") return piecewise_constant_map(g, s.cells);
  throw ValidationError(ValidationError::Code::bad_structure,
                        "unknown structure kind '" + s.kind +
                            "' (replication is implied by 'alphas')");
}

}  // namespace

ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig cfg;
  if (!j.is_object())
    throw ValidationError(ValidationError::Code::bad_schema,
                          "experiment config must be a JSON object");

  if (j.contains("graph")) {
    const json& g = j.at("graph");
    if (g.contains("file")) {
      cfg.graph.file = g.at("file").get<std::string>();
    } else if (g.contains("generator")) {
      const json& gen = g.at("generator");
      cfg.graph.kind = gen.value("kind", "");
      cfg.graph.rows = gen.value("rows", 0);
      cfg.graph.cols = gen.value("cols", 0);
      cfg.graph.corners = gen.value("corners", false);
      cfg.graph.path_n = gen.value("n", 0);
      cfg.graph.both_ends = gen.value("both_ends", false);
    } else {
      throw ValidationError(ValidationError::Code::bad_schema,
                            "graph block needs 'file' or 'generator'");
    }
  }

  cfg.alpha0 = j.value("alpha0", 1.0);
  cfg.robin_t = j.value("t", 0.0);
  if (j.contains("alphas")) cfg.alphas = j.at("alphas").get<std::vector<double>>();
  cfg.seed = j.value("seed", std::uint64_t{0});
  if (j.contains("phantom")) cfg.phantom = phantom_from_json(j.at("phantom"), cfg.seed);
  if (j.contains("p")) cfg.norm_p = norm_from_json(j.at("p"));
  cfg.lambda_reg = j.value("lambda", 0.0);
  cfg.n_terms = j.value("terms", 5);
  if (j.contains("out")) cfg.out_dir = j.at("out").get<std::string>();

  if (j.contains("structure")) {
    StructureSpec s;
    const json& st = j.at("structure");
    s.kind = st.value("kind", "");
    if (st.contains("support"))
      s.support = st.at("support").get<std::vector<std::string>>();
    if (st.contains("cells"))
      s.cells = st.at("cells").get<std::vector<std::vector<std::string>>>();
    cfg.structure = s;
  }

  if (cfg.n_terms < 1 || cfg.n_terms > kMaxInverseTerms)
    throw ValidationError(ValidationError::Code::series_cap_exceeded,
                          "terms must lie in 1.." + std::to_string(kMaxInverseTerms));
  if (cfg.graph.file && !std::filesystem::exists(*cfg.graph.file))
    throw ValidationError(ValidationError::Code::bad_schema,
                          "graph file '" + cfg.graph.file->string() +
                              "' does not exist");
  return cfg;
}

ExperimentConfig read_config(const std::filesystem::path& path) {
  return config_from_json(io::read_json(path));
}

Graph load_graph(const GraphSource& source) {
  if (source.file) return build_graph(io::read_graph_spec(*source.file));
  if (source.kind == "lattice")
    return lattice_graph(source.rows, source.cols, source.corners);
  if (source.kind == "path") return path_graph(source.path_n, source.both_ends);
  throw ValidationError(ValidationError::Code::bad_schema,
                        "graph source needs a file or a known generator kind");
}

ScatterVec read_measurement_phi(const std::filesystem::path& path, const Graph& g) {
  std::ifstream in(path);
  if (!in)
    throw ValidationError(ValidationError::Code::bad_schema,
                          "cannot open '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line) || line.rfind("r,s,", 0) != 0)
    throw ValidationError(ValidationError::Code::bad_schema,
                          "measurement CSV must start with 'r,s,...' header");
  std::map<std::pair<std::string, std::string>, double> values;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string r, s, lambda, background, phi;
    if (!std::getline(ss, r, ',') || !std::getline(ss, s, ',') ||
        !std::getline(ss, lambda, ',') || !std::getline(ss, background, ',') ||
        !std::getline(ss, phi, ','))
      throw ValidationError(ValidationError::Code::bad_schema,
                            "malformed measurement row: " + line);
    values[{r, s}] = std::stod(phi);
  }
  const auto& receivers = g.receivers();
  const auto& sources = g.sources();
  ScatterVec out(receivers.size() * sources.size());
  for (std::size_t r = 0; r < receivers.size(); ++r)
    for (std::size_t s = 0; s < sources.size(); ++s) {
      auto key = std::make_pair(g.boundary_ids()[receivers[r]],
                                g.boundary_ids()[sources[s]]);
      auto it = values.find(key);
      if (it == values.end())
        throw ValidationError(ValidationError::Code::bad_schema,
                              "measurement CSV misses pair (" + key.first + "," +
                                  key.second + ")");
      out(r * sources.size() + s) = it->second;
    }
  return out;
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  namespace fs = std::filesystem;

  Graph g = stage("graph", [&] { return load_graph(cfg.graph); });
  Potential eta = stage("phantom", [&] { return make_phantom(cfg.phantom, g); });

  fs::create_directories(cfg.out_dir);
  ExperimentReport report{g, eta, {}, {}, {}, false, {}, {}};
  auto emit = [&](const fs::path& name) {
    report.files.push_back(cfg.out_dir / name);
    return cfg.out_dir / name;
  };

  stage("write-inputs", [&] {
    io::write_potential_csv(emit("eta_true.csv"), g, eta);
    return 0;
  });

  const bool multifreq = !cfg.alphas.empty();
  ProblemParams params{cfg.alpha0, cfg.robin_t};

  if (!multifreq) {
    GreenTable g0 = stage("green", [&] { return background_green(g, params); });
    Measurement m =
        stage("forward", [&] { return robin_to_dirichlet(g, params, eta); });
    report.phi = scattering_data(m);
    stage("write-data", [&] {
      io::write_measurement_csv(emit("data.csv"), g, m);
      return 0;
    });

    report.diagnostics = stage("diagnose", [&] {
      return inverse_diagnostics(g0, params, cfg.norm_p, &report.phi);
    });

    SeriesResult series;
    if (cfg.structure) {
      StructureMap f =
          stage("structure", [&] { return resolve_structure(*cfg.structure, g); });
      auto modified = stage("reconstruct", [&] {
        return modified_inverse_series(report.phi, g0, params, f, cfg.lambda_reg,
                                       cfg.n_terms, cfg.norm_p);
      });
      series = modified.series;
      report.eta_partial_sums = modified.eta_partial_sums;
    } else {
      series = stage("reconstruct", [&] {
        return inverse_series(report.phi, g0, params, cfg.lambda_reg, cfg.n_terms,
                              cfg.norm_p);
      });
      report.eta_partial_sums.assign(series.partial_sums.begin(),
                                     series.partial_sums.end());
    }
    report.term_norms = series.term_norms;
    report.diverging = series.diverging;
  } else {
    MultiFreqProblem problem =
        stage("multifreq", [&] { return multifreq_problem(g, cfg.alphas, params); });
    MultiFreqData data =
        stage("forward", [&] { return multifreq_scattering(problem, eta); });
    report.phi = data.phi;
    stage("write-data", [&] {
      for (std::size_t i = 0; i < data.per_frequency.size(); ++i)
        io::write_measurement_csv(emit("data_f" + std::to_string(i + 1) + ".csv"),
                                  g, data.per_frequency[i]);
      return 0;
    });

    // Single-frequency diagnostics at alpha0 for reference, plus the
    // stacked invertibility verdict below.
    GreenTable g0 = stage("green", [&] { return background_green(g, params); });
    report.diagnostics = stage("diagnose", [&] {
      return inverse_diagnostics(g0, params, cfg.norm_p, nullptr);
    });

    std::optional<StructureMap> extra;
    if (cfg.structure)
      extra =
          stage("structure", [&] { return resolve_structure(*cfg.structure, g); });
    auto modified = stage("reconstruct", [&] {
      return modified_inverse_series(report.phi, problem, cfg.lambda_reg,
                                     cfg.n_terms, cfg.norm_p,
                                     extra ? &*extra : nullptr);
    });
    report.term_norms = modified.series.term_norms;
    report.diverging = modified.series.diverging;
    report.eta_partial_sums = modified.eta_partial_sums;

    stage("diagnose", [&] {
      InvertibilityReport single = invertibility_report(k1_matrix(g0, params));
      InvertibilityReport stacked = invertibility_report(stacked_k1(problem));
      nlohmann::json j;
      j["single_frequency"] = {{"rank", single.rank},
                               {"sigma_min", single.sigma_min},
                               {"determined", single.determined}};
      j["stacked"] = {{"rank", stacked.rank},
                      {"sigma_min", stacked.sigma_min},
                      {"determined", stacked.determined}};
      io::write_json(emit("invertibility.json"), j);
      return 0;
    });
  }

  stage("write-report", [&] {
    for (std::size_t j = 0; j < report.eta_partial_sums.size(); ++j)
      io::write_reconstruction_csv(emit("recon_N" + std::to_string(j + 1) + ".csv"),
                                   g, report.eta_partial_sums[j], &eta);
    io::write_series_long_csv(emit("series_long.csv"), g, report.eta_partial_sums);
    nlohmann::json diag = io::inverse_report(report.diagnostics, &report.term_norms);
    diag["diverging"] = report.diverging;
    io::write_json(emit("diagnostics.json"), diag);
    return 0;
  });

  return report;
}

}  // namespace gtomo
