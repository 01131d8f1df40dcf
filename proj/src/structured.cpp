#include "gtomo/structured.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <limits>
#include <set>

namespace gtomo {

namespace {

int interior_index(const Graph& g, const std::string& id) {
  int idx = g.index_of(id);
  if (!g.is_interior(idx))
    throw ValidationError(ValidationError::Code::bad_structure,
                          "vertex '" + id + "' is not an interior vertex");
  return idx;
}

void check_full_column_rank(const Matrix& f) {
  Eigen::BDCSVD<Matrix> svd(f);
  const Vector& sigma = svd.singularValues();
  if (sigma.size() == 0 || sigma(sigma.size() - 1) <= 1e-10 * sigma(0))
    throw ValidationError(ValidationError::Code::bad_structure,
                          "structure map is rank deficient");
}

}  // namespace

StructureMap support_restriction_map(const Graph& g,
                                     const std::vector<std::string>& support_ids) {
  if (support_ids.empty())
    throw ValidationError(ValidationError::Code::bad_structure,
                          "support set is empty");
  std::set<int> seen;
  Matrix f = Matrix::Zero(g.n_interior(), support_ids.size());
  for (std::size_t k = 0; k < support_ids.size(); ++k) {
    int v = interior_index(g, support_ids[k]);
    if (!seen.insert(v).second)
      throw ValidationError(ValidationError::Code::bad_structure,
                            "support vertex '" + support_ids[k] + "' repeated");
    f(v, k) = 1.0;
  }
  return StructureMap{std::move(f), StructureKind::support_restriction};
}

StructureMap piecewise_constant_map(
    const Graph& g, const std::vector<std::vector<std::string>>& cells) {
  if (cells.empty())
    throw ValidationError(ValidationError::Code::bad_structure,
                          "partition has no cells");
  Matrix f = Matrix::Zero(g.n_interior(), cells.size());
  std::set<int> covered;
  for (std::size_t k = 0; k < cells.size(); ++k) {
    if (cells[k].empty())
      throw ValidationError(ValidationError::Code::bad_structure,
                            "partition cell " + std::to_string(k) + " is empty");
    for (const auto& id : cells[k]) {
      int v = interior_index(g, id);
      if (!covered.insert(v).second)
        throw ValidationError(ValidationError::Code::bad_structure,
                              "vertex '" + id + "' appears in two cells");
      f(v, k) = 1.0;
    }
  }
  if (covered.size() != g.n_interior())
    throw ValidationError(ValidationError::Code::bad_structure,
                          "partition does not cover the interior");
  return StructureMap{std::move(f), StructureKind::piecewise_constant};
}

StructureMap replication_map(int n_copies, int n_base) {
  if (n_copies < 1 || n_base < 1)
    throw ValidationError(ValidationError::Code::bad_structure,
                          "replication needs at least one copy and one vertex");
  Matrix f = Matrix::Zero(static_cast<Eigen::Index>(n_copies) * n_base, n_base);
  for (int i = 0; i < n_copies; ++i)
    f.block(static_cast<Eigen::Index>(i) * n_base, 0, n_base, n_base) =
        Matrix::Identity(n_base, n_base);
  return StructureMap{std::move(f), StructureKind::replication};
}

StructureMap custom_map(Matrix f) {
  if (f.cols() > f.rows())
    throw ValidationError(ValidationError::Code::bad_structure,
                          "structure map must have k <= |V_target|");
  check_full_column_rank(f);
  return StructureMap{std::move(f), StructureKind::custom};
}

MultiFreqProblem multifreq_problem(const Graph& g, const std::vector<double>& alphas,
                                   const ProblemParams& p_base) {
  if (alphas.empty())
    throw ValidationError(ValidationError::Code::precondition,
                          "at least one absorption value is required");
  for (double a : alphas)
    if (!(a > 0.0))
      throw ValidationError(ValidationError::Code::precondition,
                            "absorption values must be positive");

  const int m = static_cast<int>(alphas.size());
  const int nv = static_cast<int>(g.n_interior());
  const int nb = static_cast<int>(g.n_boundary());

  GraphSpec spec;
  auto copy_id = [](const std::string& id, int i) {
    return id + "@" + std::to_string(i + 1);
  };
  for (int i = 0; i < m; ++i)
    for (const auto& id : g.interior_ids()) spec.interior.push_back(copy_id(id, i));
  for (int i = 0; i < m; ++i)
    for (const auto& id : g.boundary_ids()) spec.boundary.push_back(copy_id(id, i));
  for (int i = 0; i < m; ++i)
    for (const auto& [a, b] : g.edges())
      spec.edges.emplace_back(copy_id(g.id_of(a), i), copy_id(g.id_of(b), i));
  for (int i = 0; i < m; ++i) {
    for (int s : g.sources()) spec.sources.push_back(copy_id(g.boundary_ids()[s], i));
    for (int r : g.receivers())
      spec.receivers.push_back(copy_id(g.boundary_ids()[r], i));
  }

  MultiFreqProblem out{g,
                       alphas,
                       p_base.robin_t,
                       build_graph(spec, /*allow_disconnected_interior=*/m > 1),
                       {},
                       {},
                       {},
                       replication_map(m, nv)};

  out.per_copy.reserve(m);
  for (int i = 0; i < m; ++i)
    out.per_copy.push_back(
        background_green(g, ProblemParams{alphas[i], p_base.robin_t}));

  // Replicated global index of local vertex x in copy i.
  auto replicated_index = [&](int i, int x) {
    return x < nv ? i * nv + x : m * nv + i * nb + (x - nv);
  };
  out.projection.assign(static_cast<std::size_t>(m) * (nv + nb), 0);
  for (int i = 0; i < m; ++i)
    for (int x = 0; x < nv + nb; ++x) out.projection[replicated_index(i, x)] = x;

  out.block_g0 = Matrix::Zero(static_cast<Eigen::Index>(m) * (nv + nb),
                              static_cast<Eigen::Index>(m) * (nv + nb));
  for (int i = 0; i < m; ++i) {
    const Matrix& gi = out.per_copy[i].full();
    for (int x = 0; x < nv + nb; ++x)
      for (int y = 0; y < nv + nb; ++y)
        out.block_g0(replicated_index(i, x), replicated_index(i, y)) = gi(x, y);
  }
  return out;
}

ForwardOperator multifreq_operator(const MultiFreqProblem& problem) {
  std::vector<ForwardOperator::Block> blocks;
  blocks.reserve(problem.alphas.size());
  for (std::size_t i = 0; i < problem.alphas.size(); ++i) {
    const GreenTable& gi = problem.per_copy[i];
    blocks.push_back(ForwardOperator::Block{gi.block_rv(), gi.block_vv(),
                                            gi.block_vs(), problem.alphas[i]});
  }
  return ForwardOperator(std::move(blocks));
}

K1Matrix stacked_k1(const MultiFreqProblem& problem) {
  return k1_matrix(multifreq_operator(problem));
}

Matrix multifreq_system(const MultiFreqProblem& problem, const Potential& eta) {
  const int m = static_cast<int>(problem.alphas.size());
  const int nv = static_cast<int>(problem.base.n_interior());
  const int nb = static_cast<int>(problem.base.n_boundary());
  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(m) * (nv + nb),
                            static_cast<Eigen::Index>(m) * (nv + nb));
  auto replicated_index = [&](int i, int x) {
    return x < nv ? i * nv + x : m * nv + i * nb + (x - nv);
  };
  for (int i = 0; i < m; ++i) {
    Matrix mi = assemble_system(problem.base,
                                ProblemParams{problem.alphas[i], problem.robin_t},
                                eta);
    for (int x = 0; x < nv + nb; ++x)
      for (int y = 0; y < nv + nb; ++y)
        out(replicated_index(i, x), replicated_index(i, y)) = mi(x, y);
  }
  return out;
}

MultiFreqData multifreq_scattering(const MultiFreqProblem& problem,
                                   const Potential& eta) {
  MultiFreqData out;
  std::vector<ScatterVec> parts;
  Eigen::Index total = 0;
  for (std::size_t i = 0; i < problem.alphas.size(); ++i) {
    Measurement mi =
        robin_to_dirichlet(problem.base,
                           ProblemParams{problem.alphas[i], problem.robin_t}, eta);
    parts.push_back(scattering_data(mi));
    total += parts.back().size();
    out.per_frequency.push_back(std::move(mi));
  }
  out.phi.resize(total);
  Eigen::Index offset = 0;
  for (const auto& part : parts) {
    out.phi.segment(offset, part.size()) = part;
    offset += part.size();
  }
  return out;
}

ModifiedSeriesResult modified_inverse_series(const ScatterVec& phi,
                                             const GreenTable& g0,
                                             const ProblemParams& p,
                                             const StructureMap& f,
                                             double lambda_reg, int n_terms,
                                             NormP norm_p) {
  ForwardOperator op(g0, p);
  ModifiedSeriesResult out;
  out.series = inverse_series_core(phi, op, &f.matrix, lambda_reg, n_terms, norm_p);
  out.eta_partial_sums.reserve(out.series.partial_sums.size());
  for (const auto& s : out.series.partial_sums)
    out.eta_partial_sums.push_back(f.matrix * s);
  return out;
}

ModifiedSeriesResult modified_inverse_series(const ScatterVec& phi,
                                             const MultiFreqProblem& problem,
                                             double lambda_reg, int n_terms,
                                             NormP norm_p,
                                             const StructureMap* extra) {
  ForwardOperator op = multifreq_operator(problem);
  ModifiedSeriesResult out;
  out.series = inverse_series_core(phi, op, extra ? &extra->matrix : nullptr,
                                   lambda_reg, n_terms, norm_p);
  out.eta_partial_sums.reserve(out.series.partial_sums.size());
  for (const auto& s : out.series.partial_sums)
    out.eta_partial_sums.push_back(extra ? Potential(extra->matrix * s) : s);
  return out;
}

InvertibilityReport invertibility_report(const Matrix& k1_or_k1f) {
  Eigen::BDCSVD<Matrix> svd(k1_or_k1f);
  const Vector& sigma = svd.singularValues();
  InvertibilityReport out;
  if (sigma.size() == 0) return out;
  out.sigma_max = sigma(0);
  out.sigma_min = sigma(sigma.size() - 1);
  double threshold = 1e-10 * out.sigma_max;
  for (Eigen::Index i = 0; i < sigma.size(); ++i)
    if (sigma(i) > threshold) ++out.rank;
  out.condition = out.sigma_min > 0.0
                      ? out.sigma_max / out.sigma_min
                      : std::numeric_limits<double>::infinity();
  out.determined = out.rank == k1_or_k1f.cols();
  return out;
}

}  // namespace gtomo
