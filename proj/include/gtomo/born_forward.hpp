#pragma once

#include <vector>

#include "gtomo/forward.hpp"
#include "gtomo/graph.hpp"
#include "gtomo/types.hpp"

namespace gtomo {

/// Convergence constants of the forward series for a given norm index p
/// (with q the conjugate exponent):
///   nu    = alpha0 * ||G0[R;V]||_{q,p} * ||G0[V;S]||_{q,p}
///   mu    = alpha0 * C_{G0[V;V],q}
/// where C_{M,q} is the max row l^q norm and the mixed norms take the l^q
/// norm over the interior side first.
struct SeriesConstants {
  NormP norm_p = NormP::two;
  double nu = 0.0;
  double mu = 0.0;
  double c_green_q = 0.0;  // C_{G0[V;V],q}, so mu = alpha0 * c_green_q
};

/// One term of the forward series evaluated on concrete potentials.
struct ForwardTerm {
  int order = 0;
  ScatterVec value;
};

/// Truncated forward series: partial sums and the analytic tail bound.
struct ForwardSeries {
  std::vector<ScatterVec> terms;         // terms[j-1] = K_j(eta,...,eta)
  std::vector<ScatterVec> partial_sums;  // partial_sums[j-1] = sum_{i<=j}
  double tail_bound = 0.0;               // +inf when mu*||eta|| >= 1
};

/// Multilinear forward operators for one or more background absorptions.
/// Each block holds the Green's function pieces of one frequency; the data
/// vectorization is frequency-major, then receiver-major. A term of order j
/// evaluates, per block,
///   (-1)^{j+1} alpha^j G0[R;V] D_1 G0[V;V] D_2 ... D_j G0[V;S].
class ForwardOperator {
public:
  struct Block {
    Matrix g_rv;
    Matrix g_vv;
    Matrix g_vs;
    double alpha;
  };

  ForwardOperator(const GreenTable& g0, const ProblemParams& p);
  explicit ForwardOperator(std::vector<Block> blocks);

  Eigen::Index n_potential() const { return blocks_.front().g_vv.rows(); }
  Eigen::Index data_dim() const { return data_dim_; }
  const std::vector<Block>& blocks() const { return blocks_; }

  /// K_j evaluated on the given potentials (one per slot, j = etas.size()).
  ScatterVec term(const std::vector<Potential>& etas) const;

  /// Chain state: one partially evaluated |R| x |V| product per block, with
  /// the sign and alpha powers folded in. Used to share prefixes when the
  /// inverse recursion enumerates compositions.
  using ChainState = std::vector<Matrix>;
  ChainState chain_start(const Potential& w) const;
  ChainState chain_extend(const ChainState& x, const Potential& w) const;
  void chain_accumulate(const ChainState& x, ScatterVec& acc) const;

private:
  std::vector<Block> blocks_;
  Eigen::Index data_dim_;
};

/// K_j on explicit potentials. Throws shape_mismatch on bad lengths.
ForwardTerm k_term(const GreenTable& g0, const ProblemParams& p,
                   const std::vector<Potential>& etas);

/// Partial sums of K_j(eta,...,eta) for j = 1..n_terms, plus the tail bound
/// nu ||eta||^{N+1} mu^N / (1 - mu ||eta||) in the requested norm.
ForwardSeries forward_series(const GreenTable& g0, const ProblemParams& p,
                             const Potential& eta, int n_terms,
                             NormP norm_p = NormP::two);

/// nu_p, mu_p and C_{G0[V;V],q} for norm_p in {1, 2, inf}.
SeriesConstants series_constants(const GreenTable& g0, const ProblemParams& p,
                                 NormP norm_p);

}  // namespace gtomo
