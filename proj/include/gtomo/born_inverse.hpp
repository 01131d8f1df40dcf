#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gtomo/born_forward.hpp"
#include "gtomo/forward.hpp"
#include "gtomo/graph.hpp"
#include "gtomo/types.hpp"

namespace gtomo {

/// Hard cap on inverse-series length: the recursion enumerates all
/// compositions of j (2^{j-1} of them), which stops being desk-scale work
/// shortly past this point.
inline constexpr int kMaxInverseTerms = 12;

/// First-order forward operator as a dense |R||S| x |V| matrix with
/// receiver-major row order: entry ((r,s), v) = alpha0 G0(r,v) G0(v,s).
using K1Matrix = Matrix;

K1Matrix k1_matrix(const GreenTable& g0, const ProblemParams& p);

/// Stacked variant for multi-block operators (frequency-major rows).
K1Matrix k1_matrix(const ForwardOperator& op);

/// Tikhonov-regularized pseudoinverse (K^T K + lambda^2 I)^{-1} K^T, or the
/// exact Moore-Penrose pseudoinverse (singular values below 1e-12 sigma_max
/// dropped) when lambda_reg is 0. Both are evaluated through the SVD.
Matrix regularized_pinv(const Matrix& k1, double lambda_reg);

/// Inverse-series terms psi_j, their partial sums and norms. For structured
/// runs the vectors live in coefficient space (length k).
struct SeriesResult {
  std::vector<Vector> terms;
  std::vector<Vector> partial_sums;
  std::vector<double> term_norms;
  NormP norm_p = NormP::two;
  /// Raised when the term norms grow over the computed range; the series
  /// gives no sign of converging.
  bool diverging = false;
};

/// Data-form inverse Born recursion:
///   psi_1 = pinv(K1 F) phi
///   psi_j = -pinv(K1 F) sum_{m=2..j} sum_{i_1+...+i_m=j} K_m(w_1,...,w_m)
/// with w_i = F psi_i (or psi_i when no structure map is given). Compositions
/// are enumerated lexicographically and summed sequentially; chain prefixes
/// are shared across compositions with a common head.
SeriesResult inverse_series_core(const ScatterVec& phi, const ForwardOperator& op,
                                 const Matrix* structure, double lambda_reg,
                                 int n_terms, NormP norm_p = NormP::two);

/// Unstructured inverse series on a single-frequency problem.
SeriesResult inverse_series(const ScatterVec& phi, const GreenTable& g0,
                            const ProblemParams& p, double lambda_reg,
                            int n_terms, NormP norm_p = NormP::two);

/// Minimal gain C_p = min_{||eta||_p = 1} ||K1 eta||_p. Exact only for p = 2
/// (smallest singular value); for p in {1, inf} a norm-equivalence lower
/// bound is returned with is_exact = false.
struct MinGain {
  double value = 0.0;
  bool is_exact = true;
  bool injective = true;
};

MinGain min_gain(const K1Matrix& k1, NormP norm_p);

/// Convergence radii derived from the series constants and the minimal gain:
///   r_p            = (C/mu) * B          (series converges if ||phi||_p < r_p)
///   r_p_asymptotic = C^2 / (4 nu mu)     (leading behavior for small C)
///   data_side      = (1/mu) * B          (threshold on ||pinv(K1) phi||_p)
/// where B = 1 - 2(nu/C)(sqrt(1 + C/nu) - 1), evaluated in the equivalent
/// cancellation-free form (C/nu) / (1 + sqrt(1 + C/nu))^2.
struct ConvergenceRadii {
  double r_p = 0.0;
  double r_p_asymptotic = 0.0;
  double data_side_bound = 0.0;
  bool invertible = false;
};

ConvergenceRadii convergence_radius(const SeriesConstants& consts, double c_p);

/// Full diagnostics bundle for reports.
struct InverseDiagnostics {
  SeriesConstants constants;
  double c_p = 0.0;
  bool c_p_exact = true;
  bool invertible = false;
  double r_p = 0.0;
  double r_p_asymptotic = 0.0;
  double data_side_bound = 0.0;
  double k1pinv_norm = 0.0;  // ||pinv(K1)||_2, unregularized
  std::optional<double> data_norm;      // ||phi||_p
  std::optional<double> k1phi_norm;     // ||pinv(K1) phi||_p
  std::optional<double> m_lipschitz;
  std::optional<double> tau_star_value;
  std::optional<double> a;
  std::optional<double> c_na;
};

InverseDiagnostics inverse_diagnostics(const GreenTable& g0,
                                       const ProblemParams& p, NormP norm_p,
                                       const ScatterVec* phi = nullptr);

/// Truncation error bound
///   M (1/(1-tau))^n (||phi||/(tau r))^N / (1 - ||phi||/(tau r)).
/// Preconditions: M > 0, 0 < tau < 1 and ||phi|| < tau * r.
double truncation_bound(int n_terms, double phi_norm, double r_p, int n_dim,
                        double m_const, double tau);

/// Closed-form minimizer of the truncation bound over tau in (gamma, 1),
/// with gamma = ||phi|| / r_p.
double tau_star(double gamma, int n_terms, int n_dim);

/// Lipschitz ratio ||eta(phi1) - eta(phi2)||_p / ||phi1 - phi2||_p of N-term
/// reconstructions; 0 when the data coincide. Sampling many pairs estimates
/// the stability constant.
double stability_probe(const GreenTable& g0, const ProblemParams& p,
                       double lambda_reg, int n_terms, const ScatterVec& phi1,
                       const ScatterVec& phi2, NormP norm_p = NormP::two);

/// Fitted slope of log ||eta_N - eta|| against log ||eta|| over geometric
/// scalings of a reference potential; the asymptotic order is N + 1.
struct EmpiricalOrder {
  double slope = 0.0;
  int n_points = 0;
  std::vector<std::string> warnings;
};

EmpiricalOrder empirical_order(const Graph& g, const ProblemParams& p,
                               const Potential& eta, int n_terms,
                               const std::vector<double>& scalings,
                               double lambda_reg = 0.0,
                               NormP norm_p = NormP::two);

}  // namespace gtomo
