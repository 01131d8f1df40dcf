#include <doctest.h>

#include <cmath>
#include <random>

#include "gtomo/born_inverse.hpp"
#include "support/test_support.hpp"

using namespace gtomo;
using namespace gtomo::testsupport;

TEST_SUITE_BEGIN("born_inverse");

namespace {
const ProblemParams kUnit{1.0, 0.0};
}

TEST_CASE("K1 on the dumbbell is the 1x1 identity") {
  Graph g = build_graph(dumbbell_spec());
  GreenTable g0 = background_green(g, kUnit);
  K1Matrix k1 = k1_matrix(g0, kUnit);
  REQUIRE(k1.rows() == 1);
  REQUIRE(k1.cols() == 1);
  CHECK(k1(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("K1 is the Jacobian of the forward map at eta = 0") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 6; ++trial) {
    GraphSpec spec = random_graph_spec(rng, 6);
    Graph g = build_graph(spec);
    GreenTable g0 = background_green(g, kUnit);
    K1Matrix k1 = k1_matrix(g0, kUnit);

    Potential direction = random_potential(rng, g.n_interior(), 1.0);
    auto fd_error = [&](double scale) {
      Potential delta = scale * direction;
      ScatterVec phi = scattering_data(robin_to_dirichlet(g, kUnit, delta));
      return (k1 * delta - phi).norm();
    };
    double coarse = fd_error(1e-3);
    double fine = fd_error(1e-4);
    CHECK(coarse < 1e-3);
    // quadratic remainder: a 10x finer step shrinks the error ~100x
    CHECK(coarse / fine == doctest::Approx(100.0).epsilon(0.5));
  }
}

TEST_CASE("regularized pseudoinverse") {
  Matrix one = Matrix::Identity(1, 1);
  SUBCASE("lambda = 0 on [1]") {
    CHECK(regularized_pinv(one, 0.0)(0, 0) == doctest::Approx(1.0));
  }
  SUBCASE("lambda = 1 on [1] halves") {
    CHECK(regularized_pinv(one, 1.0)(0, 0) == doctest::Approx(0.5));
  }
  SUBCASE("negative lambda is rejected") {
    CHECK_THROWS_AS(regularized_pinv(one, -1.0), ValidationError);
  }
  SUBCASE("Tikhonov solutions approach the pseudoinverse as lambda -> 0") {
    Graph g = build_graph(path3_spec());
    GreenTable g0 = background_green(g, kUnit);
    K1Matrix k1 = k1_matrix(g0, kUnit);
    Matrix exact = regularized_pinv(k1, 0.0);
    double prev = std::numeric_limits<double>::infinity();
    for (double lambda : {1e-2, 1e-4, 1e-6}) {
      double err = (regularized_pinv(k1, lambda) - exact).cwiseAbs().maxCoeff();
      CHECK(err < prev);
      prev = err;
    }
    CHECK(prev < 1e-8);
  }
}

TEST_CASE("inverse series on the dumbbell: psi_j = 3^{-j}") {
  Graph g = build_graph(dumbbell_spec());
  GreenTable g0 = background_green(g, kUnit);
  ScatterVec phi = ScatterVec::Constant(1, 1.0 / 3.0);

  SeriesResult series = inverse_series(phi, g0, kUnit, 0.0, 10);
  for (int j = 1; j <= 10; ++j)
    CHECK(series.terms[j - 1](0) ==
          doctest::Approx(std::pow(3.0, -j)).epsilon(1e-12));
  for (int n = 1; n <= 10; ++n)
    CHECK(std::abs(series.partial_sums[n - 1](0) - 0.5) ==
          doctest::Approx(0.5 * std::pow(3.0, -n)).epsilon(1e-10));
  CHECK_FALSE(series.diverging);
}

TEST_CASE("inverse series edge cases") {
  Graph g = build_graph(dumbbell_spec());
  GreenTable g0 = background_green(g, kUnit);
  SUBCASE("zero data gives zero terms") {
    SeriesResult series = inverse_series(ScatterVec::Zero(1), g0, kUnit, 0.0, 5);
    for (const auto& t : series.terms) CHECK(t.cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("the composition cap is enforced") {
    CHECK_THROWS_AS(inverse_series(ScatterVec::Zero(1), g0, kUnit, 0.0, 13),
                    ValidationError);
  }
  SUBCASE("wrong data length is rejected") {
    CHECK_THROWS_AS(inverse_series(ScatterVec::Zero(2), g0, kUnit, 0.0, 3),
                    ValidationError);
  }
}

TEST_CASE("data-form recursion equals the explicit tensor operators") {
  std::mt19937_64 rng(42);

  auto check_graph = [&](const GraphSpec& spec, double alpha0) {
    Graph g = build_graph(spec);
    ProblemParams p{alpha0, 0.0};
    GreenTable g0 = background_green(g, p);
    TensorOracle oracle = TensorOracle::build(g0, p);

    // data from an actual potential, plus a couple of arbitrary vectors
    Potential eta = random_potential(rng, g.n_interior(), 0.2);
    std::vector<ScatterVec> datasets;
    datasets.push_back(scattering_data(robin_to_dirichlet(g, p, eta)));
    ScatterVec arbitrary(datasets[0].size());
    for (Eigen::Index i = 0; i < arbitrary.size(); ++i)
      arbitrary(i) = 0.05 * std::sin(1.0 + static_cast<double>(i));
    datasets.push_back(arbitrary);

    for (const auto& phi : datasets) {
      SeriesResult series = inverse_series(phi, g0, p, 0.0, 3);
      for (int j = 1; j <= 3; ++j) {
        Vector expected = oracle.psi(j, phi);
        CHECK((series.terms[j - 1] - expected).cwiseAbs().maxCoeff() < 1e-10);
      }
    }
  };

  check_graph(dumbbell_spec(), 1.0);
  check_graph(path3_spec(), 1.0);
  check_graph(path3_spec(), 0.5);

  // |V| = 4 with a cycle and two boundary vertices
  GraphSpec square;
  square.interior = {"p", "q", "r", "s"};
  square.boundary = {"x", "y"};
  square.edges = {{"p", "q"}, {"q", "r"}, {"r", "s"}, {"s", "p"},
                  {"x", "p"}, {"y", "r"}};
  square.sources = {"x", "y"};
  square.receivers = {"x", "y"};
  check_graph(square, 0.8);
}

TEST_CASE("min gain") {
  SUBCASE("identity") {
    MinGain gain = min_gain(Matrix::Identity(1, 1), NormP::two);
    CHECK(gain.value == doctest::Approx(1.0));
    CHECK(gain.is_exact);
    CHECK(gain.injective);
  }
  SUBCASE("diag(2,3) has gain 2") {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 0) = 2.0;
    m(1, 1) = 3.0;
    CHECK(min_gain(m, NormP::two).value == doctest::Approx(2.0));
  }
  SUBCASE("wide matrices are flagged non-injective") {
    MinGain gain = min_gain(Matrix::Ones(1, 10), NormP::two);
    CHECK(gain.value == 0.0);
    CHECK_FALSE(gain.injective);
  }
  SUBCASE("p = 1 and inf return flagged lower bounds") {
    Matrix m = Matrix::Identity(3, 3) * 2.0;
    MinGain one = min_gain(m, NormP::one);
    MinGain inf = min_gain(m, NormP::inf);
    CHECK_FALSE(one.is_exact);
    CHECK_FALSE(inf.is_exact);
    // true C_1 = C_inf = 2 for a scaled identity; the bound must not exceed it
    CHECK(one.value <= 2.0 + 1e-12);
    CHECK(inf.value <= 2.0 + 1e-12);
    CHECK(one.value == doctest::Approx(2.0 / std::sqrt(3.0)));
  }
}

TEST_CASE("convergence radius") {
  SUBCASE("dumbbell: r_2 = 3 - 2 sqrt(2)") {
    SeriesConstants c;
    c.nu = 1.0;
    c.mu = 1.0;
    ConvergenceRadii radii = convergence_radius(c, 1.0);
    CHECK(std::abs(radii.r_p - (3.0 - 2.0 * std::sqrt(2.0))) < 1e-12);
    CHECK(radii.invertible);
  }
  SUBCASE("small-C asymptotics approach C^2 / (4 nu mu)") {
    SeriesConstants c;
    c.nu = 1.0;
    c.mu = 1.0;
    for (double cp : {1e-3, 1e-4, 1e-5}) {
      ConvergenceRadii radii = convergence_radius(c, cp);
      CHECK(std::abs(radii.r_p / radii.r_p_asymptotic - 1.0) < cp);
    }
  }
  SUBCASE("zero gain means no radius") {
    SeriesConstants c;
    c.nu = 1.0;
    c.mu = 1.0;
    ConvergenceRadii radii = convergence_radius(c, 0.0);
    CHECK(radii.r_p == 0.0);
    CHECK_FALSE(radii.invertible);
  }
}

TEST_CASE("truncation bound and its optimizer") {
  SUBCASE("direct evaluation") {
    // gamma = 0.1, tau = 0.5: 2 * 0.2^5 / 0.8
    CHECK(truncation_bound(5, 0.1, 1.0, 1, 1.0, 0.5) ==
          doctest::Approx(8e-4).epsilon(1e-12));
  }
  SUBCASE("geometric decay in N") {
    double prev = truncation_bound(1, 0.1, 1.0, 2, 1.0, 0.5);
    for (int n = 2; n <= 8; ++n) {
      double bound = truncation_bound(n, 0.1, 1.0, 2, 1.0, 0.5);
      CHECK(bound < prev);
      prev = bound;
    }
  }
  SUBCASE("preconditions") {
    CHECK_THROWS_AS(truncation_bound(3, 0.6, 1.0, 1, 1.0, 0.5), ValidationError);
    CHECK_THROWS_AS(truncation_bound(3, 0.1, 1.0, 1, 1.0, 1.5), ValidationError);
    CHECK_THROWS_AS(truncation_bound(3, 0.1, 1.0, 1, 0.0, 0.5), ValidationError);
  }
  SUBCASE("tau_star approaches 1 as gamma -> 1") {
    CHECK(tau_star(1.0 - 1e-9, 5, 3) == doctest::Approx(1.0).epsilon(1e-6));
  }
  SUBCASE("tau_star minimizes the bound over a grid") {
    for (double gamma : {0.1, 0.3, 0.6}) {
      for (int n_terms : {2, 5}) {
        int n_dim = 4;
        double star = tau_star(gamma, n_terms, n_dim);
        double at_star = truncation_bound(n_terms, gamma, 1.0, n_dim, 1.0, star);
        for (int k = 1; k < 200; ++k) {
          double tau = gamma + (1.0 - gamma) * k / 200.0;
          if (tau <= gamma || tau >= 1.0) continue;
          double value = truncation_bound(n_terms, gamma, 1.0, n_dim, 1.0, tau);
          CHECK(at_star <= value * (1.0 + 1e-9));
        }
      }
    }
  }
}

TEST_CASE("stability probe") {
  Graph g = build_graph(dumbbell_spec());
  GreenTable g0 = background_green(g, kUnit);
  SUBCASE("identical data gives ratio zero") {
    ScatterVec phi = ScatterVec::Constant(1, 0.2);
    CHECK(stability_probe(g0, kUnit, 0.0, 5, phi, phi) == 0.0);
  }
  SUBCASE("dumbbell ratio matches d/dphi [phi / (1 - phi)]") {
    ScatterVec phi1 = ScatterVec::Constant(1, 0.10);
    ScatterVec phi2 = ScatterVec::Constant(1, 0.11);
    double ratio = stability_probe(g0, kUnit, 0.0, 12, phi1, phi2);
    CHECK(ratio == doctest::Approx(1.0 / (0.895 * 0.895)).epsilon(1e-3));
  }
}

TEST_CASE("empirical order on the dumbbell") {
  Graph g = build_graph(dumbbell_spec());
  Potential eta = Potential::Constant(1, 0.1);
  std::vector<double> scalings = {1.0, 0.5, 0.25, 0.125};

  EmpiricalOrder first = empirical_order(g, kUnit, eta, 1, scalings);
  CHECK(first.slope == doctest::Approx(2.0).epsilon(0.15));
  EmpiricalOrder second = empirical_order(g, kUnit, eta, 2, scalings);
  CHECK(second.slope == doctest::Approx(3.0).epsilon(0.1));

  CHECK_THROWS_AS(empirical_order(g, kUnit, Potential::Zero(1), 1, scalings),
                  ValidationError);
}

TEST_CASE("data inside the radius reconstructs consistently") {
  std::mt19937_64 rng(7117);
  int tested = 0;
  for (int trial = 0; trial < 20 && tested < 5; ++trial) {
    GraphSpec spec = random_graph_spec(rng, 3, 2);
    Graph g = build_graph(spec);
    GreenTable g0 = background_green(g, kUnit);
    InverseDiagnostics d = inverse_diagnostics(g0, kUnit, NormP::two);
    if (!d.invertible || d.r_p <= 0.0) continue;

    Potential eta = random_potential(rng, g.n_interior(), 0.1);
    ScatterVec phi = scattering_data(robin_to_dirichlet(g, kUnit, eta));
    for (int halvings = 0; halvings < 60 && phi.norm() >= 0.9 * d.r_p; ++halvings) {
      eta *= 0.5;
      phi = scattering_data(robin_to_dirichlet(g, kUnit, eta));
    }
    if (phi.norm() >= 0.9 * d.r_p || phi.norm() == 0.0) continue;
    ++tested;

    SeriesResult series = inverse_series(phi, g0, kUnit, 0.0, 12);
    CHECK_FALSE(series.diverging);
    Potential eta_hat = series.partial_sums.back();
    ForwardSeries forward = forward_series(g0, kUnit, eta_hat, 30);
    CHECK((forward.partial_sums.back() - phi).norm() < 1e-6);
  }
  CHECK(tested >= 3);
}

TEST_SUITE_END();
