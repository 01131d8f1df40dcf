#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "gtomo/graph.hpp"

namespace gtomo {

/// m x n grid of interior vertices ("v_r_c", 1-based) with 4-neighbor
/// edges. Each exposed side of a perimeter vertex gets its own boundary
/// vertex, so an m x n lattice has 2(m+n) boundary vertices; corner sites
/// expose two sides and therefore carry two. With `corners` set, four
/// additional boundary vertices attach to the corner sites. All boundary
/// vertices act as both sources and receivers.
GraphSpec lattice_spec(int rows, int cols, bool corners = false);
Graph lattice_graph(int rows, int cols, bool corners = false);

/// Interior path v1 - v2 - ... - vn with one boundary vertex b0 at v1
/// serving as both source and receiver; `both_ends` attaches a second
/// boundary vertex b1 at vn.
GraphSpec path_spec(int n_interior, bool both_ends = false);
Graph path_graph(int n_interior, bool both_ends = false);

/// Vertex potential description: either explicit per-vertex values or a
/// seeded set of rectangular inclusions on a lattice-generated graph.
struct PhantomSpec {
  enum class Kind { inclusions, explicit_values };
  Kind kind = Kind::explicit_values;

  // inclusions
  int count = 1;
  double amplitude = 0.0;  // resulting max entry; >= 0
  std::uint64_t seed = 0;

  // explicit_values: interior vertex id -> value
  std::map<std::string, double> values;
};

/// Builds the potential. Inclusions require lattice vertex ids ("v_r_c");
/// placement is deterministic in the seed. The result is non-negative and
/// its maximum equals the requested amplitude.
Potential make_phantom(const PhantomSpec& spec, const Graph& g);

}  // namespace gtomo
