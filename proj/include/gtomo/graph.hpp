#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "gtomo/errors.hpp"
#include "gtomo/types.hpp"

namespace gtomo {

/// Raw description of a graph, as it appears in a spec file: interior and
/// boundary vertex ids, undirected edges, and the source/receiver subsets.
struct GraphSpec {
  std::vector<std::string> interior;
  std::vector<std::string> boundary;
  std::vector<std::pair<std::string, std::string>> edges;
  std::vector<std::string> sources;
  std::vector<std::string> receivers;
};

/// Validated graph with a fixed vertex ordering (order of appearance in the
/// spec). Interior vertices get indices 0..nV-1, boundary vertices
/// nV..nV+nB-1. All matrices and vectors in the library index by this order.
///
/// Edges between two boundary vertices are legal input but never enter any
/// operator; they are kept only for round-tripping and reported as warnings.
class Graph {
public:
  std::size_t n_interior() const { return interior_ids_.size(); }
  std::size_t n_boundary() const { return boundary_ids_.size(); }
  std::size_t n_total() const { return n_interior() + n_boundary(); }

  const std::vector<std::string>& interior_ids() const { return interior_ids_; }
  const std::vector<std::string>& boundary_ids() const { return boundary_ids_; }

  /// Edges as pairs of global indices (interior first, then boundary).
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }

  /// Sources / receivers as indices into the boundary ordering (0..nB-1).
  const std::vector<int>& sources() const { return sources_; }
  const std::vector<int>& receivers() const { return receivers_; }

  bool is_interior(int global) const { return global < static_cast<int>(n_interior()); }

  const std::string& id_of(int global) const {
    return is_interior(global) ? interior_ids_[global]
                               : boundary_ids_[global - n_interior()];
  }

  /// Global index for an id; throws unknown_vertex if absent.
  int index_of(const std::string& id) const;

  /// Interior neighbors of a global vertex index, as interior indices.
  const std::vector<int>& interior_neighbors(int global) const {
    return interior_adj_[global];
  }
  /// Boundary neighbors of a global vertex index, as boundary indices.
  const std::vector<int>& boundary_neighbors(int global) const {
    return boundary_adj_[global];
  }

  /// Non-fatal observations made during validation (e.g. boundary-boundary
  /// edges, which the operators ignore).
  const std::vector<std::string>& warnings() const { return warnings_; }

  friend Graph build_graph(const GraphSpec& spec, bool allow_disconnected_interior);

private:
  std::vector<std::string> interior_ids_;
  std::vector<std::string> boundary_ids_;
  std::vector<std::pair<int, int>> edges_;
  std::vector<int> sources_;
  std::vector<int> receivers_;
  std::vector<std::vector<int>> interior_adj_;
  std::vector<std::vector<int>> boundary_adj_;
  std::vector<std::string> warnings_;
};

/// Background absorption and Robin boundary parameter.
struct ProblemParams {
  double alpha0 = 1.0;  // > 0
  double robin_t = 0.0; // >= 0, interpolates Dirichlet (large) to Neumann (0)
};

/// Dense blocks of the discrete diffusion operator in the canonical order.
struct OperatorBlocks {
  /// |V| x |V| interior Laplacian block. Diagonal holds the full vertex
  /// degree (interior plus boundary neighbors); off-diagonal is -1 per
  /// interior-interior edge.
  Matrix laplacian_vv;
  /// |V| x |dV| incidence: entry (x, y) is 1 iff interior x ~ boundary y.
  Matrix boundary_incidence;
  /// |dV| diagonal of the boundary operator: t + #interior neighbors.
  Vector boundary_diagonal;
};

/// Validates a spec and freezes the canonical ordering. Throws
/// ValidationError with a distinct code per violated invariant. The
/// connectivity requirement can be relaxed for replicated multi-frequency
/// graphs, whose components are solvable independently.
Graph build_graph(const GraphSpec& spec, bool allow_disconnected_interior = false);

/// Assembles the operator blocks; deterministic given the vertex ordering.
OperatorBlocks operator_blocks(const Graph& g, const ProblemParams& p);

/// Full (|V|+|dV|) square system matrix
///   [ L_VV + alpha0 (I + D_eta)   -A      ]
///   [ -A^T                        D_bnd   ]
/// with eta = 0 when `eta` is empty.
Matrix assemble_system(const Graph& g, const ProblemParams& p,
                       const Potential& eta);

}  // namespace gtomo
