#include "gtomo/born_inverse.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <limits>

namespace gtomo {

namespace {

Eigen::BDCSVD<Matrix> thin_svd(const Matrix& m) {
  return Eigen::BDCSVD<Matrix>(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
}

// Enumerates the tail of a composition, extending the shared chain prefix.
void accumulate_compositions(const ForwardOperator& op,
                             const std::vector<Potential>& w, int remaining,
                             const ForwardOperator::ChainState& x,
                             ScatterVec& acc) {
  for (int next = 1; next <= remaining; ++next) {
    ForwardOperator::ChainState extended = op.chain_extend(x, w[next - 1]);
    if (next == remaining)
      op.chain_accumulate(extended, acc);
    else
      accumulate_compositions(op, w, remaining - next, extended, acc);
  }
}

}  // namespace

K1Matrix k1_matrix(const ForwardOperator& op) {
  const Eigen::Index nv = op.n_potential();
  K1Matrix k1(op.data_dim(), nv);
  Eigen::Index offset = 0;
  for (const auto& b : op.blocks()) {
    const Eigen::Index nr = b.g_rv.rows();
    const Eigen::Index ns = b.g_vs.cols();
    for (Eigen::Index r = 0; r < nr; ++r)
      for (Eigen::Index s = 0; s < ns; ++s)
        for (Eigen::Index v = 0; v < nv; ++v)
          k1(offset + r * ns + s, v) = b.alpha * b.g_rv(r, v) * b.g_vs(v, s);
    offset += nr * ns;
  }
  return k1;
}

K1Matrix k1_matrix(const GreenTable& g0, const ProblemParams& p) {
  return k1_matrix(ForwardOperator(g0, p));
}

Matrix regularized_pinv(const Matrix& k1, double lambda_reg) {
  if (lambda_reg < 0.0)
    throw ValidationError(ValidationError::Code::precondition,
                          "lambda_reg must be non-negative");
  auto svd = thin_svd(k1);
  const Vector& sigma = svd.singularValues();
  Vector filter(sigma.size());
  if (lambda_reg == 0.0) {
    double cutoff = sigma.size() == 0 ? 0.0 : 1e-12 * sigma(0);
    for (Eigen::Index i = 0; i < sigma.size(); ++i)
      filter(i) = sigma(i) > cutoff ? 1.0 / sigma(i) : 0.0;
  } else {
    for (Eigen::Index i = 0; i < sigma.size(); ++i)
      filter(i) = sigma(i) / (sigma(i) * sigma(i) + lambda_reg * lambda_reg);
  }
  return svd.matrixV() * filter.asDiagonal() * svd.matrixU().transpose();
}

SeriesResult inverse_series_core(const ScatterVec& phi, const ForwardOperator& op,
                                 const Matrix* structure, double lambda_reg,
                                 int n_terms, NormP norm_p) {
  if (n_terms < 1)
    throw ValidationError(ValidationError::Code::precondition,
                          "n_terms must be at least 1");
  if (n_terms > kMaxInverseTerms)
    throw ValidationError(ValidationError::Code::series_cap_exceeded,
                          "n_terms exceeds the composition cap of " +
                              std::to_string(kMaxInverseTerms));
  if (phi.size() != op.data_dim())
    throw ValidationError(ValidationError::Code::shape_mismatch,
                          "phi length does not match the data dimension");
  if (structure && structure->rows() != op.n_potential())
    throw ValidationError(ValidationError::Code::shape_mismatch,
                          "structure map row count does not match |V|");

  Matrix k1 = k1_matrix(op);
  Matrix k1_eff = structure ? Matrix(k1 * (*structure)) : k1;
  Matrix pinv = regularized_pinv(k1_eff, lambda_reg);

  SeriesResult out;
  out.norm_p = norm_p;
  std::vector<Potential> w;  // V-space images of the terms

  Vector psi = pinv * phi;
  w.push_back(structure ? Potential((*structure) * psi) : psi);
  out.terms.push_back(psi);
  out.partial_sums.push_back(psi);
  out.term_norms.push_back(lp_norm(psi, norm_p));

  for (int j = 2; j <= n_terms; ++j) {
    ScatterVec acc = ScatterVec::Zero(op.data_dim());
    for (int head = 1; head < j; ++head) {
      ForwardOperator::ChainState x = op.chain_start(w[head - 1]);
      accumulate_compositions(op, w, j - head, x, acc);
    }
    psi = -(pinv * acc);
    w.push_back(structure ? Potential((*structure) * psi) : psi);
    out.terms.push_back(psi);
    out.partial_sums.push_back(out.partial_sums.back() + psi);
    out.term_norms.push_back(lp_norm(psi, norm_p));
  }

  out.diverging =
      out.term_norms.size() > 1 && out.term_norms.back() > out.term_norms.front();
  return out;
}

SeriesResult inverse_series(const ScatterVec& phi, const GreenTable& g0,
                            const ProblemParams& p, double lambda_reg,
                            int n_terms, NormP norm_p) {
  ForwardOperator op(g0, p);
  return inverse_series_core(phi, op, nullptr, lambda_reg, n_terms, norm_p);
}

MinGain min_gain(const K1Matrix& k1, NormP norm_p) {
  MinGain out;
  if (k1.rows() < k1.cols()) {
    out.value = 0.0;
    out.injective = false;
    out.is_exact = true;
    return out;
  }
  auto svd = thin_svd(k1);
  const Vector& sigma = svd.singularValues();
  double sigma_min = sigma(sigma.size() - 1);
  double sigma_max = sigma(0);
  out.injective = sigma_min > 1e-10 * sigma_max;
  switch (norm_p) {
    case NormP::two:
      out.value = sigma_min;
      out.is_exact = true;
      break;
    case NormP::one:
      out.value = sigma_min / std::sqrt(static_cast<double>(k1.cols()));
      out.is_exact = false;
      break;
    case NormP::inf:
      out.value = sigma_min / std::sqrt(static_cast<double>(k1.rows()));
      out.is_exact = false;
      break;
  }
  return out;
}

ConvergenceRadii convergence_radius(const SeriesConstants& consts, double c_p) {
  ConvergenceRadii out;
  if (!(c_p > 0.0) || !(consts.mu > 0.0) || !(consts.nu > 0.0)) {
    out.invertible = false;
    return out;
  }
  out.invertible = true;
  double x = c_p / consts.nu;
  double bracket = x / std::pow(1.0 + std::sqrt(1.0 + x), 2);
  out.r_p = c_p / consts.mu * bracket;
  out.r_p_asymptotic = c_p * c_p / (4.0 * consts.nu * consts.mu);
  out.data_side_bound = bracket / consts.mu;
  return out;
}

InverseDiagnostics inverse_diagnostics(const GreenTable& g0,
                                       const ProblemParams& p, NormP norm_p,
                                       const ScatterVec* phi) {
  InverseDiagnostics out;
  out.constants = series_constants(g0, p, norm_p);
  K1Matrix k1 = k1_matrix(g0, p);
  MinGain gain = min_gain(k1, norm_p);
  out.c_p = gain.value;
  out.c_p_exact = gain.is_exact;

  ConvergenceRadii radii = convergence_radius(out.constants, out.c_p);
  out.invertible = gain.injective && radii.invertible;
  out.r_p = radii.r_p;
  out.r_p_asymptotic = radii.r_p_asymptotic;
  out.data_side_bound = radii.data_side_bound;

  // Diagnostics always use the unregularized pseudoinverse.
  auto svd = thin_svd(k1);
  const Vector& sigma = svd.singularValues();
  double cutoff = sigma.size() == 0 ? 0.0 : 1e-12 * sigma(0);
  double smallest_kept = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < sigma.size(); ++i)
    if (sigma(i) > cutoff) smallest_kept = std::min(smallest_kept, sigma(i));
  out.k1pinv_norm = std::isfinite(smallest_kept) ? 1.0 / smallest_kept
                                                 : std::numeric_limits<double>::infinity();

  if (phi) {
    out.data_norm = lp_norm(*phi, norm_p);
    Vector psi1 = regularized_pinv(k1, 0.0) * (*phi);
    out.k1phi_norm = lp_norm(psi1, norm_p);
    if (out.r_p > 0.0) {
      double gamma = *out.data_norm / out.r_p;
      if (gamma > 0.0 && gamma < 1.0)
        out.tau_star_value =
            tau_star(gamma, kMaxInverseTerms, static_cast<int>(k1.cols()));
    }
  }
  return out;
}

double truncation_bound(int n_terms, double phi_norm, double r_p, int n_dim,
                        double m_const, double tau) {
  if (!(m_const > 0.0))
    throw ValidationError(ValidationError::Code::precondition,
                          "stability constant M must be positive");
  if (!(tau > 0.0 && tau < 1.0))
    throw ValidationError(ValidationError::Code::precondition,
                          "tau must lie in (0, 1)");
  if (!(phi_norm < tau * r_p))
    throw ValidationError(ValidationError::Code::precondition,
                          "bound requires ||phi|| < tau * r_p");
  if (n_terms < 1)
    throw ValidationError(ValidationError::Code::precondition,
                          "n_terms must be at least 1");
  double ratio = phi_norm / (tau * r_p);
  return m_const * std::pow(1.0 / (1.0 - tau), n_dim) *
         std::pow(ratio, n_terms) / (1.0 - ratio);
}

double tau_star(double gamma, int n_terms, int n_dim) {
  if (!(gamma > 0.0 && gamma < 1.0))
    throw ValidationError(ValidationError::Code::precondition,
                          "gamma must lie in (0, 1)");
  double denom = gamma * (n_dim + n_terms);
  double a = (n_terms - gamma) / denom;
  double disc = std::pow(1.0 - a, 2) + 4.0 * (1.0 - gamma) / denom;
  return 0.5 * gamma * ((1.0 + a) + std::sqrt(disc));
}

double stability_probe(const GreenTable& g0, const ProblemParams& p,
                       double lambda_reg, int n_terms, const ScatterVec& phi1,
                       const ScatterVec& phi2, NormP norm_p) {
  if (phi1.size() != phi2.size())
    throw ValidationError(ValidationError::Code::shape_mismatch,
                          "data vectors must have equal length");
  double denom = lp_norm(phi1 - phi2, norm_p);
  if (denom == 0.0) return 0.0;
  SeriesResult a = inverse_series(phi1, g0, p, lambda_reg, n_terms, norm_p);
  SeriesResult b = inverse_series(phi2, g0, p, lambda_reg, n_terms, norm_p);
  return lp_norm(a.partial_sums.back() - b.partial_sums.back(), norm_p) / denom;
}

EmpiricalOrder empirical_order(const Graph& g, const ProblemParams& p,
                               const Potential& eta, int n_terms,
                               const std::vector<double>& scalings,
                               double lambda_reg, NormP norm_p) {
  GreenTable g0 = background_green(g, p);
  SeriesConstants consts = series_constants(g0, p, norm_p);

  EmpiricalOrder out;
  std::vector<double> log_eta, log_err;
  for (double s : scalings) {
    Potential scaled = s * eta;
    double scaled_norm = lp_norm(scaled, norm_p);
    if (scaled_norm == 0.0) {
      out.warnings.push_back("scaling " + std::to_string(s) +
                             " gives a zero potential; excluded");
      continue;
    }
    if (consts.mu * scaled_norm >= 1.0) {
      out.warnings.push_back("scaling " + std::to_string(s) +
                             " puts the forward series outside its "
                             "convergence condition; excluded");
      continue;
    }
    ScatterVec phi = scattering_data(robin_to_dirichlet(g, p, scaled));
    SeriesResult series =
        inverse_series(phi, g0, p, lambda_reg, n_terms, norm_p);
    if (series.diverging) {
      out.warnings.push_back("scaling " + std::to_string(s) +
                             " gives a diverging inverse series; excluded");
      continue;
    }
    double err = lp_norm(series.partial_sums.back() - scaled, norm_p);
    if (err == 0.0) {
      out.warnings.push_back("scaling " + std::to_string(s) +
                             " reconstructs exactly; excluded");
      continue;
    }
    log_eta.push_back(std::log(scaled_norm));
    log_err.push_back(std::log(err));
  }

  out.n_points = static_cast<int>(log_eta.size());
  if (out.n_points < 2)
    throw ValidationError(ValidationError::Code::precondition,
                          "empirical order needs at least 2 usable scalings");

  double mean_x = 0.0, mean_y = 0.0;
  for (int i = 0; i < out.n_points; ++i) {
    mean_x += log_eta[i];
    mean_y += log_err[i];
  }
  mean_x /= out.n_points;
  mean_y /= out.n_points;
  double sxx = 0.0, sxy = 0.0;
  for (int i = 0; i < out.n_points; ++i) {
    sxx += (log_eta[i] - mean_x) * (log_eta[i] - mean_x);
    sxy += (log_eta[i] - mean_x) * (log_err[i] - mean_y);
  }
  out.slope = sxy / sxx;
  return out;
}

}  // namespace gtomo
