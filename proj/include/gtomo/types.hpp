#pragma once

#include <Eigen/Dense>

namespace gtomo {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Vertex potential eta, indexed by the interior vertex order of a Graph.
using Potential = Eigen::VectorXd;

/// Scattering data phi, indexed receiver-major over R x S: entry
/// r_idx * |S| + s_idx holds phi(r, s).
using ScatterVec = Eigen::VectorXd;

/// Supported norm indices. NormP::two is what the experiments use; one and
/// inf exist because the convergence constants are cheap to evaluate there.
enum class NormP { one = 1, two = 2, inf = 0 };

/// Conjugate exponent: 1/p + 1/q = 1 over {1, 2, inf}.
inline NormP conjugate(NormP p) {
  switch (p) {
    case NormP::one: return NormP::inf;
    case NormP::two: return NormP::two;
    case NormP::inf: return NormP::one;
  }
  return NormP::two;
}

/// l^p norm of a vector for p in {1, 2, inf}.
double lp_norm(const Vector& v, NormP p);

/// Row-wise mixed norm: for each row take the l^q norm across columns, then
/// combine the per-row values with an l^p norm. With outer_p = inf this is
/// the constant C_{M,q} = max_k ||M(k)||_q.
double mixed_norm(const Matrix& m, NormP inner_q, NormP outer_p);

}  // namespace gtomo
