#pragma once

#include <vector>

#include "gtomo/born_inverse.hpp"
#include "gtomo/forward.hpp"
#include "gtomo/graph.hpp"

namespace gtomo {

enum class StructureKind { support_restriction, piecewise_constant, replication, custom };

/// Linear parameterization eta = F eta' of the vertex potential. Columns are
/// vertex indicators for the support and piecewise kinds, and stacked
/// identities for frequency replication.
struct StructureMap {
  Matrix matrix;  // |V_target| x k, full column rank
  StructureKind kind = StructureKind::custom;

  Eigen::Index n_parameters() const { return matrix.cols(); }
};

/// F restricted to a support set: one indicator column per listed vertex.
StructureMap support_restriction_map(const Graph& g,
                                     const std::vector<std::string>& support_ids);

/// F constant on each partition cell: one indicator column per cell. The
/// cells must be non-empty, disjoint and cover the interior.
StructureMap piecewise_constant_map(const Graph& g,
                                    const std::vector<std::vector<std::string>>& cells);

/// F stacking n_copies identities over a base of size n_base.
StructureMap replication_map(int n_copies, int n_base);

/// Caller-supplied F; rejected if rank deficient.
StructureMap custom_map(Matrix f);

/// Measurements at several background absorptions on the same graph,
/// realized as one problem on a replicated graph whose copies share the
/// vertex potential.
struct MultiFreqProblem {
  Graph base;
  std::vector<double> alphas;
  double robin_t = 0.0;
  /// m disjoint copies of the base graph, ids suffixed "@i".
  Graph replicated;
  /// Background Green's table of copy i, computed with alpha_i.
  std::vector<GreenTable> per_copy;
  /// Replicated background Green's function, block diagonal across copies.
  Matrix block_g0;
  /// Replicated global vertex index -> base global vertex index.
  std::vector<int> projection;
  /// The replication structure map (m|V| x |V|).
  StructureMap replication;
};

MultiFreqProblem multifreq_problem(const Graph& g, const std::vector<double>& alphas,
                                   const ProblemParams& p_base);

/// Per-frequency forward blocks acting on the shared base potential. Data
/// is stacked frequency-major, then receiver-major.
ForwardOperator multifreq_operator(const MultiFreqProblem& problem);

/// Stacked first-order matrix K1 composed with the replication map: one
/// |R||S| row block per frequency, |V| columns.
K1Matrix stacked_k1(const MultiFreqProblem& problem);

/// Full replicated system matrix with per-copy absorption, for direct
/// solves of the replicated problem.
Matrix multifreq_system(const MultiFreqProblem& problem, const Potential& eta);

/// Simulated stacked scattering data: per-frequency direct solves.
struct MultiFreqData {
  ScatterVec phi;  // frequency-major
  std::vector<Measurement> per_frequency;
};

MultiFreqData multifreq_scattering(const MultiFreqProblem& problem,
                                   const Potential& eta);

/// Inverse series for a structured potential. The recursion is the standard
/// one with K1 replaced by K1 F and every reconstruction mapped through F
/// before re-entering the forward operators.
struct ModifiedSeriesResult {
  SeriesResult series;                      // terms in coefficient space
  std::vector<Potential> eta_partial_sums;  // F applied to the partial sums
};

ModifiedSeriesResult modified_inverse_series(const ScatterVec& phi,
                                             const GreenTable& g0,
                                             const ProblemParams& p,
                                             const StructureMap& f,
                                             double lambda_reg, int n_terms,
                                             NormP norm_p = NormP::two);

/// Multi-frequency variant; an optional extra structure map composes with
/// the replication (eta = F_extra eta'').
ModifiedSeriesResult modified_inverse_series(const ScatterVec& phi,
                                             const MultiFreqProblem& problem,
                                             double lambda_reg, int n_terms,
                                             NormP norm_p = NormP::two,
                                             const StructureMap* extra = nullptr);

/// SVD-based rank/conditioning summary with the numerical-rank threshold
/// 1e-10 sigma_max.
struct InvertibilityReport {
  int rank = 0;
  double sigma_min = 0.0;
  double sigma_max = 0.0;
  double condition = 0.0;
  bool determined = false;  // rank equals the column count
};

InvertibilityReport invertibility_report(const Matrix& k1_or_k1f);

}  // namespace gtomo
