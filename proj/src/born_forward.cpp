#include "gtomo/born_forward.hpp"

#include <cmath>
#include <limits>

namespace gtomo {

ForwardOperator::ForwardOperator(const GreenTable& g0, const ProblemParams& p)
    : ForwardOperator(std::vector<Block>{
          Block{g0.block_rv(), g0.block_vv(), g0.block_vs(), p.alpha0}}) {}

ForwardOperator::ForwardOperator(std::vector<Block> blocks)
    : blocks_(std::move(blocks)), data_dim_(0) {
  for (const auto& b : blocks_) data_dim_ += b.g_rv.rows() * b.g_vs.cols();
}

ForwardOperator::ChainState ForwardOperator::chain_start(const Potential& w) const {
  if (w.size() != n_potential())
    throw ValidationError(ValidationError::Code::shape_mismatch,
                          "potential length does not match interior size");
  ChainState x;
  x.reserve(blocks_.size());
  for (const auto& b : blocks_) x.push_back(b.alpha * b.g_rv * w.asDiagonal());
  return x;
}

ForwardOperator::ChainState ForwardOperator::chain_extend(const ChainState& x,
                                                          const Potential& w) const {
  if (w.size() != n_potential())
    throw ValidationError(ValidationError::Code::shape_mismatch,
                          "potential length does not match interior size");
  ChainState out;
  out.reserve(blocks_.size());
  for (std::size_t i = 0; i < blocks_.size(); ++i)
    out.push_back(-blocks_[i].alpha * (x[i] * blocks_[i].g_vv) * w.asDiagonal());
  return out;
}

void ForwardOperator::chain_accumulate(const ChainState& x, ScatterVec& acc) const {
  Eigen::Index offset = 0;
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    Matrix rs = x[i] * blocks_[i].g_vs;
    for (Eigen::Index r = 0; r < rs.rows(); ++r)
      for (Eigen::Index s = 0; s < rs.cols(); ++s)
        acc(offset + r * rs.cols() + s) += rs(r, s);
    offset += rs.rows() * rs.cols();
  }
}

ScatterVec ForwardOperator::term(const std::vector<Potential>& etas) const {
  if (etas.empty())
    throw ValidationError(ValidationError::Code::precondition,
                          "term order must be at least 1");
  ChainState x = chain_start(etas.front());
  for (std::size_t i = 1; i < etas.size(); ++i) x = chain_extend(x, etas[i]);
  ScatterVec out = ScatterVec::Zero(data_dim_);
  chain_accumulate(x, out);
  return out;
}

ForwardTerm k_term(const GreenTable& g0, const ProblemParams& p,
                   const std::vector<Potential>& etas) {
  ForwardOperator op(g0, p);
  return ForwardTerm{static_cast<int>(etas.size()), op.term(etas)};
}

ForwardSeries forward_series(const GreenTable& g0, const ProblemParams& p,
                             const Potential& eta, int n_terms, NormP norm_p) {
  if (n_terms < 1)
    throw ValidationError(ValidationError::Code::precondition,
                          "n_terms must be at least 1");
  ForwardOperator op(g0, p);

  ForwardSeries out;
  out.terms.reserve(n_terms);
  out.partial_sums.reserve(n_terms);
  ForwardOperator::ChainState x = op.chain_start(eta);
  ScatterVec sum = ScatterVec::Zero(op.data_dim());
  for (int j = 1; j <= n_terms; ++j) {
    if (j > 1) x = op.chain_extend(x, eta);
    ScatterVec term = ScatterVec::Zero(op.data_dim());
    op.chain_accumulate(x, term);
    sum += term;
    out.terms.push_back(std::move(term));
    out.partial_sums.push_back(sum);
  }

  SeriesConstants c = series_constants(g0, p, norm_p);
  double eta_norm = lp_norm(eta, norm_p);
  double ratio = c.mu * eta_norm;
  if (ratio < 1.0) {
    out.tail_bound = c.nu * std::pow(eta_norm, n_terms + 1) *
                     std::pow(c.mu, n_terms) / (1.0 - ratio);
  } else {
    out.tail_bound = std::numeric_limits<double>::infinity();
  }
  return out;
}

SeriesConstants series_constants(const GreenTable& g0, const ProblemParams& p,
                                 NormP norm_p) {
  NormP q = conjugate(norm_p);
  SeriesConstants out;
  out.norm_p = norm_p;
  // Mixed norms take l^q over the interior side first; G0[V;S] therefore
  // enters transposed so its outer index is the source side.
  double rv = mixed_norm(g0.block_rv(), q, norm_p);
  double vs = mixed_norm(g0.block_vs().transpose(), q, norm_p);
  out.c_green_q = mixed_norm(g0.block_vv(), q, NormP::inf);
  out.nu = p.alpha0 * rv * vs;
  out.mu = p.alpha0 * out.c_green_q;
  return out;
}

}  // namespace gtomo
