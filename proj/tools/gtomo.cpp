// Command-line front end: graph/phantom generation, forward simulation,
// diagnostics, and single- or multi-frequency reconstruction.
//
// Exit codes: 0 success, 2 validation error, 3 numerical failure.

#include <CLI11.hpp>
#include <filesystem>
#include <iostream>
#include <nlohmann/json.hpp>

#include "gtomo/born_forward.hpp"
#include "gtomo/born_inverse.hpp"
#include "gtomo/experiment.hpp"
#include "gtomo/generators.hpp"
#include "gtomo/io.hpp"
#include "gtomo/structured.hpp"

namespace {

using namespace gtomo;
namespace fs = std::filesystem;

struct CommonOpts {
  std::string config_path;
  std::string graph_path;
  std::string generator;  // "lattice:R,C[,corners]" or "path:N[,both]"
  double alpha0 = 1.0;
  double robin_t = 0.0;
  std::string norm_p = "2";
  double lambda_reg = 0.0;
  int n_terms = 5;
  std::uint64_t seed = 0;
  std::string out_dir = ".";
  bool have_alpha0 = false, have_t = false, have_p = false, have_lambda = false,
       have_terms = false, have_seed = false, have_out = false;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--config", o.config_path, "experiment config JSON");
  cmd->add_option("--graph", o.graph_path, "graph spec JSON file");
  cmd->add_option("--generator", o.generator,
                  "inline generator, e.g. lattice:12,12 or path:10");
  cmd->add_option("--alpha0", o.alpha0, "background absorption")
      ->each([&](const std::string&) { o.have_alpha0 = true; });
  cmd->add_option("--t", o.robin_t, "Robin boundary parameter")
      ->each([&](const std::string&) { o.have_t = true; });
  cmd->add_option("--p", o.norm_p, "norm index: 1, 2 or inf")
      ->each([&](const std::string&) { o.have_p = true; });
  cmd->add_option("--lambda", o.lambda_reg, "Tikhonov parameter")
      ->each([&](const std::string&) { o.have_lambda = true; });
  cmd->add_option("--terms", o.n_terms, "number of series terms")
      ->each([&](const std::string&) { o.have_terms = true; });
  cmd->add_option("--seed", o.seed, "random seed")
      ->each([&](const std::string&) { o.have_seed = true; });
  cmd->add_option("--out", o.out_dir, "output directory")
      ->each([&](const std::string&) { o.have_out = true; });
}

NormP parse_norm(const std::string& s) {
  if (s == "1") return NormP::one;
  if (s == "2") return NormP::two;
  if (s == "inf") return NormP::inf;
  throw ValidationError(ValidationError::Code::bad_schema,
                        "norm p must be 1, 2 or inf");
}

GraphSource parse_generator(const std::string& text) {
  GraphSource src;
  auto colon = text.find(':');
  std::string kind = text.substr(0, colon);
  std::string args = colon == std::string::npos ? "" : text.substr(colon + 1);
  std::vector<std::string> parts;
  std::stringstream ss(args);
  std::string item;
  while (std::getline(ss, item, ',')) parts.push_back(item);
  if (kind == "lattice") {
    if (parts.size() < 2)
      throw ValidationError(ValidationError::Code::bad_schema,
                            "lattice generator needs rows,cols");
    src.kind = "lattice";
    src.rows = std::stoi(parts[0]);
    src.cols = std::stoi(parts[1]);
    src.corners = parts.size() > 2 && parts[2] == "corners";
    return src;
  }
  if (kind == "path") {
    if (parts.empty())
      throw ValidationError(ValidationError::Code::bad_schema,
                            "path generator needs a length");
    src.kind = "path";
    src.path_n = std::stoi(parts[0]);
    src.both_ends = parts.size() > 1 && parts[1] == "both";
    return src;
  }
  throw ValidationError(ValidationError::Code::bad_schema,
                        "unknown generator kind '" + kind + "'");
}

// Config file first, then command-line overrides.
ExperimentConfig merge_config(const CommonOpts& o) {
  ExperimentConfig cfg;
  if (!o.config_path.empty()) cfg = read_config(o.config_path);
  if (!o.graph_path.empty()) {
    cfg.graph = GraphSource{};
    cfg.graph.file = o.graph_path;
  } else if (!o.generator.empty()) {
    cfg.graph = parse_generator(o.generator);
  }
  if (o.have_alpha0) cfg.alpha0 = o.alpha0;
  if (o.have_t) cfg.robin_t = o.robin_t;
  if (o.have_p) cfg.norm_p = parse_norm(o.norm_p);
  if (o.have_lambda) cfg.lambda_reg = o.lambda_reg;
  if (o.have_terms) cfg.n_terms = o.n_terms;
  if (o.have_seed) cfg.seed = o.seed;
  if (o.have_out) cfg.out_dir = o.out_dir;
  if (cfg.n_terms < 1 || cfg.n_terms > kMaxInverseTerms)
    throw ValidationError(ValidationError::Code::series_cap_exceeded,
                          "terms must lie in 1.." + std::to_string(kMaxInverseTerms));
  return cfg;
}

void print_warnings(const Graph& g) {
  for (const auto& w : g.warnings()) std::cerr << "warning: " << w << '\n';
}

int cmd_gen_graph(const std::string& kind_text, bool corners,
                  const std::string& out_path) {
  GraphSource src = parse_generator(kind_text);
  GraphSpec spec = src.kind == "lattice"
                       ? lattice_spec(src.rows, src.cols, src.corners || corners)
                       : path_spec(src.path_n, src.both_ends);
  build_graph(spec);  // validate before writing
  io::write_graph_spec(out_path, spec);
  std::cout << "wrote " << out_path << '\n';
  return 0;
}

int cmd_gen_phantom(const CommonOpts& o, const std::string& kind,
                    int count, double amplitude,
                    const std::vector<std::string>& values,
                    const std::string& out_path) {
  ExperimentConfig cfg = merge_config(o);
  Graph g = load_graph(cfg.graph);
  print_warnings(g);
  PhantomSpec spec;
  if (kind == "inclusions") {
    spec.kind = PhantomSpec::Kind::inclusions;
    spec.count = count;
    spec.amplitude = amplitude;
    spec.seed = cfg.seed;
  } else {
    spec.kind = PhantomSpec::Kind::explicit_values;
    for (const auto& kv : values) {
      auto eq = kv.find('=');
      if (eq == std::string::npos)
        throw ValidationError(ValidationError::Code::bad_schema,
                              "--value entries look like vertex=number");
      spec.values[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
    }
  }
  Potential eta = make_phantom(spec, g);
  io::write_potential_csv(out_path, g, eta);
  std::cout << "wrote " << out_path << '\n';
  return 0;
}

int cmd_forward(const CommonOpts& o, const std::string& eta_path,
                bool export_green) {
  ExperimentConfig cfg = merge_config(o);
  Graph g = load_graph(cfg.graph);
  print_warnings(g);
  Potential eta = eta_path.empty() ? make_phantom(cfg.phantom, g)
                                   : io::read_potential_csv(eta_path, g);
  fs::create_directories(cfg.out_dir);
  ProblemParams params{cfg.alpha0, cfg.robin_t};
  if (cfg.alphas.empty()) {
    Measurement m = robin_to_dirichlet(g, params, eta);
    io::write_measurement_csv(fs::path(cfg.out_dir) / "data.csv", g, m);
    GreenTable g0 = background_green(g, params);
    if (export_green) io::write_green_csv(fs::path(cfg.out_dir) / "green.csv", g0);
    SeriesConstants c = series_constants(g0, params, cfg.norm_p);
    double tail = forward_series(g0, params, eta, cfg.n_terms, cfg.norm_p).tail_bound;
    io::write_json(fs::path(cfg.out_dir) / "forward.json",
                   io::forward_report(c, tail, cfg.n_terms));
  } else {
    MultiFreqProblem problem = multifreq_problem(g, cfg.alphas, params);
    MultiFreqData data = multifreq_scattering(problem, eta);
    for (std::size_t i = 0; i < data.per_frequency.size(); ++i)
      io::write_measurement_csv(
          fs::path(cfg.out_dir) / ("data_f" + std::to_string(i + 1) + ".csv"), g,
          data.per_frequency[i]);
  }
  std::cout << "wrote simulated data to " << cfg.out_dir << '\n';
  return 0;
}

int cmd_diagnose(const CommonOpts& o, const std::string& phi_path) {
  ExperimentConfig cfg = merge_config(o);
  Graph g = load_graph(cfg.graph);
  print_warnings(g);
  ProblemParams params{cfg.alpha0, cfg.robin_t};
  GreenTable g0 = background_green(g, params);

  std::optional<ScatterVec> phi;
  if (!phi_path.empty()) phi = read_measurement_phi(phi_path, g);

  InverseDiagnostics d =
      inverse_diagnostics(g0, params, cfg.norm_p, phi ? &*phi : nullptr);
  InvertibilityReport inv = invertibility_report(k1_matrix(g0, params));

  nlohmann::json j = io::inverse_report(d, nullptr);
  j["rank"] = inv.rank;
  j["sigma_min"] = inv.sigma_min;
  j["sigma_max"] = inv.sigma_max;
  j["verdict"] = inv.determined ? "determined" : "underdetermined";
  fs::create_directories(cfg.out_dir);
  io::write_json(fs::path(cfg.out_dir) / "diagnostics.json", j);
  std::cout << j.dump(2) << '\n';
  return 0;
}

int cmd_reconstruct(const CommonOpts& o, const std::string& phi_path) {
  ExperimentConfig cfg = merge_config(o);
  if (phi_path.empty()) {
    ExperimentReport report = run_experiment(cfg);
    std::cout << "reconstruction written to " << cfg.out_dir << " ("
              << report.eta_partial_sums.size() << " partial sums"
              << (report.diverging ? ", series diverging" : "") << ")\n";
    return 0;
  }
  Graph g = load_graph(cfg.graph);
  print_warnings(g);
  ProblemParams params{cfg.alpha0, cfg.robin_t};
  GreenTable g0 = background_green(g, params);
  ScatterVec phi = read_measurement_phi(phi_path, g);
  SeriesResult series =
      inverse_series(phi, g0, params, cfg.lambda_reg, cfg.n_terms, cfg.norm_p);
  fs::create_directories(cfg.out_dir);
  for (std::size_t j = 0; j < series.partial_sums.size(); ++j)
    io::write_reconstruction_csv(
        fs::path(cfg.out_dir) / ("recon_N" + std::to_string(j + 1) + ".csv"), g,
        series.partial_sums[j], nullptr);
  io::write_series_long_csv(fs::path(cfg.out_dir) / "series_long.csv", g,
                            series.partial_sums);
  InverseDiagnostics d = inverse_diagnostics(g0, params, cfg.norm_p, &phi);
  nlohmann::json diag = io::inverse_report(d, &series.term_norms);
  diag["diverging"] = series.diverging;
  io::write_json(fs::path(cfg.out_dir) / "diagnostics.json", diag);
  std::cout << "reconstruction written to " << cfg.out_dir
            << (series.diverging ? " (series diverging)" : "") << '\n';
  return 0;
}

int cmd_multifreq(const CommonOpts& o, std::vector<double> alphas) {
  ExperimentConfig cfg = merge_config(o);
  if (!alphas.empty()) cfg.alphas = std::move(alphas);
  if (cfg.alphas.empty())
    throw ValidationError(ValidationError::Code::bad_schema,
                          "multifreq needs 'alphas' in the config or --alphas");
  ExperimentReport report = run_experiment(cfg);
  std::cout << "multi-frequency reconstruction written to " << cfg.out_dir << " ("
            << report.eta_partial_sums.size() << " partial sums"
            << (report.diverging ? ", series diverging" : "") << ")\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Forward and inverse Born series for diffusion on graphs"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate graphs and phantoms");
  gen->require_subcommand(1);
  auto* gen_graph = gen->add_subcommand("graph", "write a generated graph spec");
  std::string gen_kind, gen_out = "graph.json";
  bool gen_corners = false;
  gen_graph->add_option("--kind", gen_kind, "lattice:R,C[,corners] or path:N[,both]")
      ->required();
  gen_graph->add_flag("--corners", gen_corners,
                      "lattice variant with diagonal corner boundary vertices");
  gen_graph->add_option("--out", gen_out, "output file");

  auto* gen_phantom = gen->add_subcommand("phantom", "write a phantom potential");
  CommonOpts phantom_opts;
  add_common(gen_phantom, phantom_opts);
  std::string phantom_kind = "explicit", phantom_out = "eta.csv";
  int phantom_count = 1;
  double phantom_amplitude = 0.0;
  std::vector<std::string> phantom_values;
  gen_phantom->add_option("--kind", phantom_kind, "inclusions or explicit");
  gen_phantom->add_option("--count", phantom_count, "number of inclusions");
  gen_phantom->add_option("--amplitude", phantom_amplitude, "inclusion height");
  gen_phantom->add_option("--value", phantom_values, "vertex=value (repeatable)");
  gen_phantom->add_option("--phantom-out", phantom_out, "output file");

  // forward
  auto* forward = app.add_subcommand("forward", "simulate boundary data");
  CommonOpts forward_opts;
  add_common(forward, forward_opts);
  std::string forward_eta;
  bool forward_green = false;
  forward->add_option("--eta", forward_eta, "potential CSV (else config phantom)");
  forward->add_flag("--export-green", forward_green,
                    "also write the background Green's table CSV");

  // diagnose
  auto* diagnose =
      app.add_subcommand("diagnose", "constants, radii and invertibility");
  CommonOpts diagnose_opts;
  add_common(diagnose, diagnose_opts);
  std::string diagnose_phi;
  diagnose->add_option("--phi", diagnose_phi, "measurement CSV for data norms");

  // reconstruct
  auto* reconstruct = app.add_subcommand("reconstruct", "run the inverse series");
  CommonOpts reconstruct_opts;
  add_common(reconstruct, reconstruct_opts);
  std::string reconstruct_phi;
  reconstruct->add_option("--phi", reconstruct_phi,
                          "measurement CSV (else simulate from config phantom)");

  // multifreq
  auto* multifreq =
      app.add_subcommand("multifreq", "structured multi-frequency recovery");
  CommonOpts multifreq_opts;
  add_common(multifreq, multifreq_opts);
  std::vector<double> multifreq_alphas;
  multifreq->add_option("--alphas", multifreq_alphas, "absorption per frequency");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen_graph->parsed()) return cmd_gen_graph(gen_kind, gen_corners, gen_out);
    if (gen_phantom->parsed())
      return cmd_gen_phantom(phantom_opts, phantom_kind, phantom_count,
                             phantom_amplitude, phantom_values, phantom_out);
    if (forward->parsed())
      return cmd_forward(forward_opts, forward_eta, forward_green);
    if (diagnose->parsed()) return cmd_diagnose(diagnose_opts, diagnose_phi);
    if (reconstruct->parsed())
      return cmd_reconstruct(reconstruct_opts, reconstruct_phi);
    if (multifreq->parsed())
      return cmd_multifreq(multifreq_opts, multifreq_alphas);
  } catch (const gtomo::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return 2;
  } catch (const gtomo::NumericError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
