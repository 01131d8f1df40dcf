#include <doctest.h>

#include <random>

#include "gtomo/generators.hpp"
#include "gtomo/structured.hpp"
#include "support/test_support.hpp"

using namespace gtomo;
using namespace gtomo::testsupport;

TEST_SUITE_BEGIN("structured");

namespace {
const ProblemParams kUnit{1.0, 0.0};
}

TEST_CASE("structure map builders") {
  SUBCASE("support restriction on the dumbbell") {
    Graph g = build_graph(dumbbell_spec());
    StructureMap f = support_restriction_map(g, {"a"});
    REQUIRE(f.matrix.rows() == 1);
    REQUIRE(f.matrix.cols() == 1);
    CHECK(f.matrix(0, 0) == 1.0);
  }
  SUBCASE("one piecewise cell spans the interior") {
    Graph g = build_graph(path3_spec());
    StructureMap f = piecewise_constant_map(g, {{"a", "b", "c"}});
    REQUIRE(f.matrix.cols() == 1);
    CHECK((f.matrix - Matrix::Ones(3, 1)).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("replication stacks identities") {
    StructureMap f = replication_map(2, 10);
    REQUIRE(f.matrix.rows() == 20);
    REQUIRE(f.matrix.cols() == 10);
    CHECK((f.matrix.topRows(10) - Matrix::Identity(10, 10)).cwiseAbs().maxCoeff() ==
          0.0);
    CHECK((f.matrix.bottomRows(10) - Matrix::Identity(10, 10))
              .cwiseAbs()
              .maxCoeff() == 0.0);
  }
  SUBCASE("bad structures are rejected") {
    Graph g = build_graph(path3_spec());
    CHECK_THROWS_AS(support_restriction_map(g, {}), ValidationError);
    CHECK_THROWS_AS(support_restriction_map(g, {"a", "a"}), ValidationError);
    CHECK_THROWS_AS(piecewise_constant_map(g, {{"a"}, {"b"}}), ValidationError);
    CHECK_THROWS_AS(piecewise_constant_map(g, {{"a", "b"}, {"b", "c"}}),
                    ValidationError);
    Matrix rank_deficient(3, 2);
    rank_deficient << 1, 1, 2, 2, 3, 3;
    CHECK_THROWS_AS(custom_map(rank_deficient), ValidationError);
    CHECK_THROWS_AS(custom_map(Matrix::Ones(2, 3)), ValidationError);
  }
}

TEST_CASE("identity structure map reproduces the plain series bit for bit") {
  Graph g = build_graph(path3_spec());
  GreenTable g0 = background_green(g, kUnit);
  Potential eta = Potential::Zero(3);
  eta << 0.05, 0.1, 0.02;
  ScatterVec phi = scattering_data(robin_to_dirichlet(g, kUnit, eta));

  StructureMap identity = custom_map(Matrix::Identity(3, 3));
  ModifiedSeriesResult modified =
      modified_inverse_series(phi, g0, kUnit, identity, 0.0, 6);
  SeriesResult plain = inverse_series(phi, g0, kUnit, 0.0, 6);

  REQUIRE(modified.series.terms.size() == plain.terms.size());
  for (std::size_t j = 0; j < plain.terms.size(); ++j) {
    CHECK((modified.series.terms[j] - plain.terms[j]).cwiseAbs().maxCoeff() ==
          0.0);
    CHECK((modified.eta_partial_sums[j] - plain.partial_sums[j])
              .cwiseAbs()
              .maxCoeff() == 0.0);
  }
}

TEST_CASE("support restriction on the dumbbell recovers eta = 1/2") {
  Graph g = build_graph(dumbbell_spec());
  GreenTable g0 = background_green(g, kUnit);
  StructureMap f = support_restriction_map(g, {"a"});
  ScatterVec phi = ScatterVec::Constant(1, 1.0 / 3.0);
  ModifiedSeriesResult result =
      modified_inverse_series(phi, g0, kUnit, f, 0.0, 10);
  CHECK(std::abs(result.eta_partial_sums.back()(0) - 0.5) < 1e-4);
  CHECK(std::abs(result.eta_partial_sums.back()(0) - 0.5) ==
        doctest::Approx(0.5 * std::pow(3.0, -10)).epsilon(1e-8));
}

TEST_CASE("multifreq with one frequency reduces to the plain problem") {
  Graph g = build_graph(path3_spec());
  MultiFreqProblem problem = multifreq_problem(g, {1.0}, kUnit);
  GreenTable g0 = background_green(g, kUnit);

  CHECK((stacked_k1(problem) - k1_matrix(g0, kUnit)).cwiseAbs().maxCoeff() == 0.0);

  Potential eta = Potential::Zero(3);
  eta << 0.04, 0.08, 0.01;
  ScatterVec phi = multifreq_scattering(problem, eta).phi;
  ModifiedSeriesResult modified = modified_inverse_series(phi, problem, 0.0, 5);
  SeriesResult plain = inverse_series(phi, g0, kUnit, 0.0, 5);
  for (std::size_t j = 0; j < plain.terms.size(); ++j)
    CHECK((modified.series.terms[j] - plain.terms[j]).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("replicated problem blocks") {
  Graph g = build_graph(path3_spec());
  std::vector<double> alphas = {0.6, 1.3};
  MultiFreqProblem problem = multifreq_problem(g, alphas, ProblemParams{1.0, 0.1});

  const int nv = 3, nb = 2, m = 2;
  REQUIRE(problem.replicated.n_interior() == static_cast<std::size_t>(m * nv));
  REQUIRE(problem.replicated.n_boundary() == static_cast<std::size_t>(m * nb));

  SUBCASE("cross-copy entries of the block Green's function are exactly zero") {
    auto copy_of = [&](int global) {
      return global < m * nv ? global / nv : (global - m * nv) / nb;
    };
    for (int i = 0; i < m * (nv + nb); ++i)
      for (int j = 0; j < m * (nv + nb); ++j)
        if (copy_of(i) != copy_of(j)) CHECK(problem.block_g0(i, j) == 0.0);
  }

  SUBCASE("diagonal blocks equal the per-frequency background Green tables") {
    for (int i = 0; i < m; ++i) {
      GreenTable gi = background_green(g, ProblemParams{alphas[i], 0.1});
      Matrix expected = gi.full();
      for (int x = 0; x < nv; ++x)
        for (int y = 0; y < nv; ++y)
          CHECK(problem.block_g0(i * nv + x, i * nv + y) == expected(x, y));
      for (int x = 0; x < nb; ++x)
        for (int y = 0; y < nb; ++y)
          CHECK(problem.block_g0(m * nv + i * nb + x, m * nv + i * nb + y) ==
                expected(nv + x, nv + y));
    }
  }

  SUBCASE("stacked forward terms concatenate the per-frequency terms") {
    Potential eta = Potential::Zero(nv);
    eta << 0.2, 0.05, 0.12;
    ForwardOperator stacked = multifreq_operator(problem);
    for (int order = 1; order <= 3; ++order) {
      std::vector<Potential> slots(order, eta);
      ScatterVec whole = stacked.term(slots);
      Eigen::Index offset = 0;
      for (int i = 0; i < m; ++i) {
        ForwardOperator single(problem.per_copy[i],
                               ProblemParams{alphas[i], 0.1});
        ScatterVec part = single.term(slots);
        CHECK((whole.segment(offset, part.size()) - part).cwiseAbs().maxCoeff() ==
              0.0);
        offset += part.size();
      }
    }
  }

  SUBCASE("replicated direct solve matches per-frequency measurements") {
    Potential eta = Potential::Zero(nv);
    eta << 0.3, 0.0, 0.15;
    Matrix system = multifreq_system(problem, eta);
    Eigen::PartialPivLU<Matrix> lu(system);
    for (int i = 0; i < m; ++i) {
      Measurement direct = robin_to_dirichlet(
          g, ProblemParams{alphas[i], 0.1}, eta);
      for (int s = 0; s < nb; ++s) {
        Vector rhs = Vector::Zero(m * (nv + nb));
        rhs(m * nv + i * nb + g.sources()[s]) = 1.0;
        Vector sol = lu.solve(rhs);
        for (int r = 0; r < nb; ++r) {
          double replicated_value = sol(m * nv + i * nb + g.receivers()[r]);
          CHECK(replicated_value ==
                doctest::Approx(direct.lambda(r, s)).epsilon(1e-10));
        }
      }
    }
  }
}

TEST_CASE("per-copy operators vs the alpha-rescaled Green's route") {
  // Building the blocks from (alpha_i / alpha0) G_i with the base alpha0
  // prefactor multiplies every order-j term by alpha_i / alpha0: a chain of
  // order j holds j+1 Green's factors. The test pins that exact relation.
  Graph g = build_graph(path3_spec());
  double alpha0 = 1.0;
  std::vector<double> alphas = {0.5, 2.0};
  MultiFreqProblem problem = multifreq_problem(g, alphas, ProblemParams{alpha0, 0.0});

  ForwardOperator direct = multifreq_operator(problem);
  std::vector<ForwardOperator::Block> scaled_blocks;
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    double scale = alphas[i] / alpha0;
    const GreenTable& gi = problem.per_copy[i];
    scaled_blocks.push_back(ForwardOperator::Block{
        scale * gi.block_rv(), scale * gi.block_vv(), scale * gi.block_vs(),
        alpha0});
  }
  ForwardOperator rescaled(std::move(scaled_blocks));

  Potential eta = Potential::Zero(3);
  eta << 0.1, 0.3, 0.2;
  for (int order = 1; order <= 3; ++order) {
    std::vector<Potential> slots(order, eta);
    ScatterVec direct_term = direct.term(slots);
    ScatterVec rescaled_term = rescaled.term(slots);
    Eigen::Index offset = 0;
    for (std::size_t i = 0; i < alphas.size(); ++i) {
      Eigen::Index block = 4;  // |R| |S| = 2 x 2 per frequency
      ScatterVec expected =
          (alphas[i] / alpha0) * direct_term.segment(offset, block);
      CHECK((rescaled_term.segment(offset, block) - expected)
                .cwiseAbs()
                .maxCoeff() < 1e-14);
      offset += block;
    }
  }
}

TEST_CASE("path-10 needs the multi-frequency data") {
  Graph path = path_graph(10);
  GreenTable g0 = background_green(path, ProblemParams{0.1, 0.1});
  K1Matrix single = k1_matrix(g0, ProblemParams{0.1, 0.1});
  REQUIRE(single.rows() == 1);
  REQUIRE(single.cols() == 10);

  InvertibilityReport single_report = invertibility_report(single);
  CHECK(single_report.rank < 10);
  CHECK_FALSE(single_report.determined);
  CHECK(min_gain(single, NormP::two).value == 0.0);

  std::vector<double> alphas;
  for (int i = 1; i <= 25; ++i) alphas.push_back(0.1 + 0.15 * std::sqrt(i));
  MultiFreqProblem problem =
      multifreq_problem(path, alphas, ProblemParams{0.1, 0.1});
  K1Matrix stacked_matrix = stacked_k1(problem);
  REQUIRE(stacked_matrix.rows() == 25);
  InvertibilityReport stacked = invertibility_report(stacked_matrix);
  // Full column rank: the smallest singular value sits well above the SVD
  // noise floor max(m,n) eps sigma_max, though below the conservative
  // 1e-10 sigma_max verdict threshold (the spectrum spans ~13 decades).
  double noise_floor = 25.0 * std::numeric_limits<double>::epsilon() *
                       stacked.sigma_max;
  CHECK(stacked.sigma_min > 10.0 * noise_floor);
  CHECK(stacked.rank >= 8);
}

TEST_CASE("invertibility verdicts") {
  CHECK(invertibility_report(Matrix::Identity(1, 1)).determined);
  CHECK(invertibility_report(Matrix::Identity(1, 1)).rank == 1);
}

TEST_SUITE_END();
