#include <doctest.h>

#include <random>

#include "gtomo/graph.hpp"
#include "support/test_support.hpp"

using namespace gtomo;
using namespace gtomo::testsupport;

TEST_SUITE_BEGIN("graph");

TEST_CASE("dumbbell is the smallest legal graph") {
  Graph g = build_graph(dumbbell_spec());
  CHECK(g.n_interior() == 1);
  CHECK(g.n_boundary() == 1);
  CHECK(g.sources().size() == 1);
  CHECK(g.receivers().size() == 1);
  CHECK(g.warnings().empty());
}

TEST_CASE("validation errors carry distinct codes") {
  auto expect_code = [](GraphSpec spec, ValidationError::Code code) {
    try {
      build_graph(spec);
      FAIL("expected a validation error");
    } catch (const ValidationError& e) {
      CHECK(e.code() == code);
    }
  };

  SUBCASE("duplicate id") {
    GraphSpec spec = dumbbell_spec();
    spec.boundary.push_back("a");
    expect_code(spec, ValidationError::Code::duplicate_id);
  }
  SUBCASE("self loop") {
    GraphSpec spec = dumbbell_spec();
    spec.edges.push_back({"a", "a"});
    expect_code(spec, ValidationError::Code::self_loop);
  }
  SUBCASE("unknown endpoint") {
    GraphSpec spec = dumbbell_spec();
    spec.edges.push_back({"a", "zzz"});
    expect_code(spec, ValidationError::Code::unknown_vertex);
  }
  SUBCASE("boundary vertex without interior neighbor") {
    GraphSpec spec = dumbbell_spec();
    spec.boundary.push_back("c");
    expect_code(spec, ValidationError::Code::isolated_boundary);
  }
  SUBCASE("disconnected interior") {
    GraphSpec spec = path3_spec();
    spec.edges.erase(spec.edges.begin());  // drop a-b, isolating a
    spec.edges.push_back({"l", "b"});      // keep boundary attached
    expect_code(spec, ValidationError::Code::disconnected_interior);
  }
  SUBCASE("empty sources") {
    GraphSpec spec = dumbbell_spec();
    spec.sources.clear();
    expect_code(spec, ValidationError::Code::empty_sources);
  }
  SUBCASE("empty receivers") {
    GraphSpec spec = dumbbell_spec();
    spec.receivers.clear();
    expect_code(spec, ValidationError::Code::empty_receivers);
  }
  SUBCASE("source not a boundary vertex") {
    GraphSpec spec = dumbbell_spec();
    spec.sources = {"a"};
    expect_code(spec, ValidationError::Code::sources_not_boundary);
  }
  SUBCASE("receiver not a boundary vertex") {
    GraphSpec spec = dumbbell_spec();
    spec.receivers = {"nope"};
    expect_code(spec, ValidationError::Code::receivers_not_boundary);
  }
}

TEST_CASE("boundary-boundary edges warn and stay out of the operators") {
  GraphSpec spec = path3_spec();
  spec.edges.push_back({"l", "r"});
  Graph g = build_graph(spec);
  REQUIRE(g.warnings().size() == 1);

  Graph plain = build_graph(path3_spec());
  ProblemParams p{1.0, 0.0};
  OperatorBlocks with = operator_blocks(g, p);
  OperatorBlocks without = operator_blocks(plain, p);
  CHECK((with.laplacian_vv - without.laplacian_vv).cwiseAbs().maxCoeff() == 0.0);
  CHECK((with.boundary_incidence - without.boundary_incidence).cwiseAbs().maxCoeff() ==
        0.0);
  CHECK((with.boundary_diagonal - without.boundary_diagonal).cwiseAbs().maxCoeff() ==
        0.0);
}

TEST_CASE("dumbbell operator blocks, t = 0") {
  Graph g = build_graph(dumbbell_spec());
  OperatorBlocks blocks = operator_blocks(g, ProblemParams{1.0, 0.0});
  CHECK(blocks.laplacian_vv(0, 0) == 1.0);
  CHECK(blocks.boundary_incidence(0, 0) == 1.0);
  CHECK(blocks.boundary_diagonal(0) == 1.0);
}

TEST_CASE("path-3 boundary diagonal picks up the Robin parameter") {
  Graph g = build_graph(path3_spec());
  OperatorBlocks blocks = operator_blocks(g, ProblemParams{1.0, 0.1});
  REQUIRE(blocks.boundary_diagonal.size() == 2);
  CHECK(blocks.boundary_diagonal(0) == doctest::Approx(1.1));
  CHECK(blocks.boundary_diagonal(1) == doctest::Approx(1.1));
}

TEST_CASE("random graphs: symmetry, degree identity, determinism") {
  std::mt19937_64 rng(1234);
  for (int trial = 0; trial < 30; ++trial) {
    GraphSpec spec = random_graph_spec(rng, 10);
    Graph g = build_graph(spec);
    OperatorBlocks blocks = operator_blocks(g, ProblemParams{0.7, 0.3});

    CHECK((blocks.laplacian_vv - blocks.laplacian_vv.transpose())
              .cwiseAbs()
              .maxCoeff() == 0.0);

    for (int x = 0; x < static_cast<int>(g.n_interior()); ++x) {
      double off_diag = 0.0;
      for (int y = 0; y < static_cast<int>(g.n_interior()); ++y)
        if (y != x) off_diag += std::abs(blocks.laplacian_vv(x, y));
      double boundary_row = blocks.boundary_incidence.row(x).sum();
      CHECK(blocks.laplacian_vv(x, x) == doctest::Approx(off_diag + boundary_row));
    }

    Graph g2 = build_graph(spec);
    OperatorBlocks blocks2 = operator_blocks(g2, ProblemParams{0.7, 0.3});
    CHECK((blocks.laplacian_vv - blocks2.laplacian_vv).cwiseAbs().maxCoeff() == 0.0);
    CHECK((blocks.boundary_incidence - blocks2.boundary_incidence)
              .cwiseAbs()
              .maxCoeff() == 0.0);
  }
}

TEST_CASE("assemble_system matches the raw-spec oracle") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 10; ++trial) {
    GraphSpec spec = random_graph_spec(rng, 8);
    Graph g = build_graph(spec);
    Potential eta = random_potential(rng, g.n_interior(), 0.4);
    std::map<std::string, double> eta_map;
    for (std::size_t v = 0; v < g.n_interior(); ++v)
      eta_map[spec.interior[v]] = eta(v);
    Matrix expected = oracle_system(spec, 0.9, 0.2, eta_map);
    Matrix actual = assemble_system(g, ProblemParams{0.9, 0.2}, eta);
    CHECK((expected - actual).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_SUITE_END();
