#include "gtomo/generators.hpp"

#include <algorithm>
#include <random>

namespace gtomo {

namespace {

std::string cell_id(int r, int c) {
  return "v_" + std::to_string(r) + "_" + std::to_string(c);
}

// Parses "v_r_c"; returns false for ids that are not lattice cells.
bool parse_cell_id(const std::string& id, int& r, int& c) {
  if (id.rfind("v_", 0) != 0) return false;
  auto second = id.find('_', 2);
  if (second == std::string::npos) return false;
  try {
    r = std::stoi(id.substr(2, second - 2));
    c = std::stoi(id.substr(second + 1));
  } catch (const std::exception&) {
    return false;
  }
  return true;
}

}  // namespace

GraphSpec lattice_spec(int rows, int cols, bool corners) {
  if (rows < 1 || cols < 1)
    throw ValidationError(ValidationError::Code::precondition,
                          "lattice dimensions must be at least 1x1");
  GraphSpec spec;
  for (int r = 1; r <= rows; ++r)
    for (int c = 1; c <= cols; ++c) spec.interior.push_back(cell_id(r, c));
  for (int r = 1; r <= rows; ++r)
    for (int c = 1; c <= cols; ++c) {
      if (r < rows) spec.edges.emplace_back(cell_id(r, c), cell_id(r + 1, c));
      if (c < cols) spec.edges.emplace_back(cell_id(r, c), cell_id(r, c + 1));
    }

  auto add_boundary = [&](const std::string& id, const std::string& attach) {
    spec.boundary.push_back(id);
    spec.edges.emplace_back(id, attach);
  };
  for (int c = 1; c <= cols; ++c) add_boundary("b_n_" + std::to_string(c), cell_id(1, c));
  for (int c = 1; c <= cols; ++c)
    add_boundary("b_s_" + std::to_string(c), cell_id(rows, c));
  for (int r = 1; r <= rows; ++r) add_boundary("b_w_" + std::to_string(r), cell_id(r, 1));
  for (int r = 1; r <= rows; ++r)
    add_boundary("b_e_" + std::to_string(r), cell_id(r, cols));
  if (corners) {
    add_boundary("b_nw", cell_id(1, 1));
    add_boundary("b_ne", cell_id(1, cols));
    add_boundary("b_sw", cell_id(rows, 1));
    add_boundary("b_se", cell_id(rows, cols));
  }

  spec.sources = spec.boundary;
  spec.receivers = spec.boundary;
  return spec;
}

Graph lattice_graph(int rows, int cols, bool corners) {
  return build_graph(lattice_spec(rows, cols, corners));
}

GraphSpec path_spec(int n_interior, bool both_ends) {
  if (n_interior < 1)
    throw ValidationError(ValidationError::Code::precondition,
                          "path needs at least one interior vertex");
  GraphSpec spec;
  for (int i = 1; i <= n_interior; ++i) spec.interior.push_back("v" + std::to_string(i));
  for (int i = 1; i < n_interior; ++i)
    spec.edges.emplace_back("v" + std::to_string(i), "v" + std::to_string(i + 1));
  spec.boundary.push_back("b0");
  spec.edges.emplace_back("b0", "v1");
  if (both_ends) {
    spec.boundary.push_back("b1");
    spec.edges.emplace_back("b1", "v" + std::to_string(n_interior));
  }
  spec.sources = {"b0"};
  spec.receivers = {"b0"};
  return spec;
}

Graph path_graph(int n_interior, bool both_ends) {
  return build_graph(path_spec(n_interior, both_ends));
}

Potential make_phantom(const PhantomSpec& spec, const Graph& g) {
  Potential eta = Potential::Zero(g.n_interior());

  if (spec.kind == PhantomSpec::Kind::explicit_values) {
    for (const auto& [id, value] : spec.values) {
      if (value < 0.0)
        throw ValidationError(ValidationError::Code::bad_phantom,
                              "phantom values must be non-negative");
      int idx = g.index_of(id);
      if (!g.is_interior(idx))
        throw ValidationError(ValidationError::Code::bad_phantom,
                              "phantom vertex '" + id + "' is not interior");
      eta(idx) = value;
    }
    return eta;
  }

  if (spec.amplitude < 0.0)
    throw ValidationError(ValidationError::Code::bad_phantom,
                          "inclusion amplitude must be non-negative");
  if (spec.count < 1)
    throw ValidationError(ValidationError::Code::bad_phantom,
                          "at least one inclusion is required");

  // Lattice extents from the vertex ids.
  int rows = 0, cols = 0;
  std::vector<std::pair<int, int>> coords(g.n_interior());
  for (std::size_t v = 0; v < g.n_interior(); ++v) {
    int r, c;
    if (!parse_cell_id(g.interior_ids()[v], r, c))
      throw ValidationError(ValidationError::Code::bad_phantom,
                            "inclusion phantoms need lattice ids (v_r_c); got '" +
                                g.interior_ids()[v] + "'");
    coords[v] = {r, c};
    rows = std::max(rows, r);
    cols = std::max(cols, c);
  }

  // Raw engine draws keep placement identical across standard libraries.
  std::mt19937_64 rng(spec.seed);
  auto draw = [&](int lo, int hi) {  // inclusive range
    return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
  };
  for (int k = 0; k < spec.count; ++k) {
    int h = draw(std::max(1, rows / 4), std::max(1, rows / 2));
    int w = draw(std::max(1, cols / 4), std::max(1, cols / 2));
    int r0 = draw(1, rows - h + 1);
    int c0 = draw(1, cols - w + 1);
    for (std::size_t v = 0; v < coords.size(); ++v) {
      auto [r, c] = coords[v];
      if (r >= r0 && r < r0 + h && c >= c0 && c < c0 + w) eta(v) = spec.amplitude;
    }
  }
  return eta;
}

}  // namespace gtomo
