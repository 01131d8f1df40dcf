#include "gtomo/graph.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

namespace gtomo {

int Graph::index_of(const std::string& id) const {
  for (std::size_t i = 0; i < interior_ids_.size(); ++i)
    if (interior_ids_[i] == id) return static_cast<int>(i);
  for (std::size_t i = 0; i < boundary_ids_.size(); ++i)
    if (boundary_ids_[i] == id) return static_cast<int>(n_interior() + i);
  throw ValidationError(ValidationError::Code::unknown_vertex,
                        "unknown vertex id '" + id + "'");
}

Graph build_graph(const GraphSpec& spec, bool allow_disconnected_interior) {
  Graph g;

  std::unordered_map<std::string, int> index;
  auto add_vertex = [&](const std::string& id) {
    if (!index.emplace(id, static_cast<int>(index.size())).second)
      throw ValidationError(ValidationError::Code::duplicate_id,
                            "duplicate vertex id '" + id + "'");
  };
  for (const auto& id : spec.interior) add_vertex(id);
  for (const auto& id : spec.boundary) add_vertex(id);
  g.interior_ids_ = spec.interior;
  g.boundary_ids_ = spec.boundary;

  const int n_int = static_cast<int>(spec.interior.size());
  const int n_all = static_cast<int>(index.size());

  auto lookup = [&](const std::string& id) {
    auto it = index.find(id);
    if (it == index.end())
      throw ValidationError(ValidationError::Code::unknown_vertex,
                            "edge endpoint '" + id + "' is not a declared vertex");
    return it->second;
  };

  g.interior_adj_.resize(n_all);
  g.boundary_adj_.resize(n_all);
  std::unordered_set<long long> seen_edges;
  for (const auto& [a_id, b_id] : spec.edges) {
    int a = lookup(a_id);
    int b = lookup(b_id);
    if (a == b)
      throw ValidationError(ValidationError::Code::self_loop,
                            "self-loop at vertex '" + a_id + "'");
    long long key = static_cast<long long>(std::min(a, b)) * n_all + std::max(a, b);
    if (!seen_edges.insert(key).second) continue;  // ignore duplicate edge lines
    if (a >= n_int && b >= n_int) {
      g.warnings_.push_back("edge between boundary vertices '" + a_id + "' and '" +
                            b_id + "' is ignored by all operators");
      g.edges_.emplace_back(a, b);
      continue;
    }
    g.edges_.emplace_back(a, b);
    auto connect = [&](int from, int to) {
      if (to < n_int)
        g.interior_adj_[from].push_back(to);
      else
        g.boundary_adj_[from].push_back(to - n_int);
    };
    connect(a, b);
    connect(b, a);
  }

  // Every boundary vertex must see the interior.
  for (int b = 0; b < static_cast<int>(spec.boundary.size()); ++b) {
    if (g.interior_adj_[n_int + b].empty())
      throw ValidationError(ValidationError::Code::isolated_boundary,
                            "boundary vertex '" + spec.boundary[b] +
                                "' has no interior neighbor");
  }

  // Interior subgraph must be connected (boundary vertices do not help).
  if (n_int > 0 && !allow_disconnected_interior) {
    std::vector<char> visited(n_int, 0);
    std::vector<int> stack{0};
    visited[0] = 1;
    int count = 1;
    while (!stack.empty()) {
      int x = stack.back();
      stack.pop_back();
      for (int y : g.interior_adj_[x]) {
        if (!visited[y]) {
          visited[y] = 1;
          ++count;
          stack.push_back(y);
        }
      }
    }
    if (count != n_int)
      throw ValidationError(ValidationError::Code::disconnected_interior,
                            "interior subgraph is not connected");
  }

  auto boundary_subset = [&](const std::vector<std::string>& ids,
                             ValidationError::Code empty_code,
                             ValidationError::Code subset_code,
                             const char* label) {
    if (ids.empty())
      throw ValidationError(empty_code, std::string(label) + " set is empty");
    std::vector<int> out;
    out.reserve(ids.size());
    for (const auto& id : ids) {
      auto it = index.find(id);
      if (it == index.end() || it->second < n_int)
        throw ValidationError(subset_code, std::string(label) + " vertex '" + id +
                                               "' is not a boundary vertex");
      out.push_back(it->second - n_int);
    }
    return out;
  };
  g.sources_ = boundary_subset(spec.sources, ValidationError::Code::empty_sources,
                               ValidationError::Code::sources_not_boundary, "source");
  g.receivers_ =
      boundary_subset(spec.receivers, ValidationError::Code::empty_receivers,
                      ValidationError::Code::receivers_not_boundary, "receiver");

  return g;
}

OperatorBlocks operator_blocks(const Graph& g, const ProblemParams& p) {
  const int nv = static_cast<int>(g.n_interior());
  const int nb = static_cast<int>(g.n_boundary());

  OperatorBlocks blocks;
  blocks.laplacian_vv = Matrix::Zero(nv, nv);
  blocks.boundary_incidence = Matrix::Zero(nv, nb);
  blocks.boundary_diagonal = Vector::Zero(nb);

  for (int x = 0; x < nv; ++x) {
    const auto& iadj = g.interior_neighbors(x);
    const auto& badj = g.boundary_neighbors(x);
    blocks.laplacian_vv(x, x) = static_cast<double>(iadj.size() + badj.size());
    for (int y : iadj) blocks.laplacian_vv(x, y) = -1.0;
    for (int b : badj) blocks.boundary_incidence(x, b) = 1.0;
  }
  for (int b = 0; b < nb; ++b) {
    blocks.boundary_diagonal(b) =
        p.robin_t + static_cast<double>(g.interior_neighbors(nv + b).size());
  }
  return blocks;
}

Matrix assemble_system(const Graph& g, const ProblemParams& p,
                       const Potential& eta) {
  const int nv = static_cast<int>(g.n_interior());
  const int nb = static_cast<int>(g.n_boundary());
  if (eta.size() != 0 && eta.size() != nv)
    throw ValidationError(ValidationError::Code::shape_mismatch,
                          "eta length does not match interior size");

  OperatorBlocks blocks = operator_blocks(g, p);
  Matrix m = Matrix::Zero(nv + nb, nv + nb);
  m.topLeftCorner(nv, nv) = blocks.laplacian_vv;
  m.topLeftCorner(nv, nv).diagonal().array() += p.alpha0;
  if (eta.size() == nv)
    m.topLeftCorner(nv, nv).diagonal() += p.alpha0 * eta;
  m.topRightCorner(nv, nb) = -blocks.boundary_incidence;
  m.bottomLeftCorner(nb, nv) = -blocks.boundary_incidence.transpose();
  m.bottomRightCorner(nb, nb) = blocks.boundary_diagonal.asDiagonal();
  return m;
}

}  // namespace gtomo
