#include "gtomo/types.hpp"

namespace gtomo {

double lp_norm(const Vector& v, NormP p) {
  switch (p) {
    case NormP::one: return v.lpNorm<1>();
    case NormP::two: return v.norm();
    case NormP::inf: return v.size() == 0 ? 0.0 : v.lpNorm<Eigen::Infinity>();
  }
  return v.norm();
}

double mixed_norm(const Matrix& m, NormP inner_q, NormP outer_p) {
  Vector row_norms(m.rows());
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    row_norms(r) = lp_norm(m.row(r).transpose(), inner_q);
  return lp_norm(row_norms, outer_p);
}

}  // namespace gtomo
