#include "gtomo/forward.hpp"

#include <Eigen/LU>

namespace gtomo {

namespace {

std::vector<int> global_boundary_rows(const Graph& g, const std::vector<int>& bset) {
  std::vector<int> rows;
  rows.reserve(bset.size());
  for (int b : bset) rows.push_back(static_cast<int>(g.n_interior()) + b);
  return rows;
}

void check_residual(const Matrix& m, const Matrix& x, const Matrix& rhs,
                    const char* what) {
  double scale = std::max({1.0, rhs.cwiseAbs().maxCoeff(),
                           m.cwiseAbs().maxCoeff() * x.cwiseAbs().maxCoeff()});
  double residual = (m * x - rhs).cwiseAbs().maxCoeff();
  if (!(residual <= 1e-10 * scale))
    throw NumericError(std::string(what) + ": linear solve residual " +
                       std::to_string(residual) + " exceeds tolerance");
}

}  // namespace

GreenTable::GreenTable(Matrix g0, const Graph& g)
    : g0_(std::move(g0)),
      nv_(g.n_interior()),
      receiver_rows_(global_boundary_rows(g, g.receivers())),
      source_rows_(global_boundary_rows(g, g.sources())) {}

Matrix GreenTable::block_vv() const {
  return g0_.topLeftCorner(nv_, nv_);
}

Matrix GreenTable::block_rv() const {
  Matrix out(receiver_rows_.size(), nv_);
  for (std::size_t i = 0; i < receiver_rows_.size(); ++i)
    out.row(i) = g0_.row(receiver_rows_[i]).head(nv_);
  return out;
}

Matrix GreenTable::block_vs() const {
  Matrix out(nv_, source_rows_.size());
  for (std::size_t j = 0; j < source_rows_.size(); ++j)
    out.col(j) = g0_.col(source_rows_[j]).head(nv_);
  return out;
}

Matrix GreenTable::block_rs() const {
  Matrix out(receiver_rows_.size(), source_rows_.size());
  for (std::size_t i = 0; i < receiver_rows_.size(); ++i)
    for (std::size_t j = 0; j < source_rows_.size(); ++j)
      out(i, j) = g0_(receiver_rows_[i], source_rows_[j]);
  return out;
}

Matrix GreenTable::block(const std::vector<int>& rows,
                         const std::vector<int>& cols) const {
  Matrix out(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) out(i, j) = g0_(rows[i], cols[j]);
  return out;
}

DirectSolution solve_direct(const Graph& g, const ProblemParams& p,
                            const Potential& eta, const Vector& interior_source,
                            const Vector& boundary_source,
                            bool allow_negative_eta) {
  const int nv = static_cast<int>(g.n_interior());
  const int nb = static_cast<int>(g.n_boundary());
  if (interior_source.size() != nv || boundary_source.size() != nb)
    throw ValidationError(ValidationError::Code::shape_mismatch,
                          "source vector lengths do not match graph");
  if (eta.size() != 0 && !allow_negative_eta && eta.minCoeff() < 0.0)
    throw ValidationError(ValidationError::Code::precondition,
                          "eta must be non-negative (use the override to force)");

  Matrix m = assemble_system(g, p, eta);
  Vector rhs(nv + nb);
  rhs.head(nv) = interior_source;
  rhs.tail(nb) = boundary_source;

  Eigen::PartialPivLU<Matrix> lu(m);
  Vector x = lu.solve(rhs);
  check_residual(m, x, rhs, "solve_direct");

  return DirectSolution{x.head(nv), x.tail(nb)};
}

GreenTable background_green(const Graph& g, const ProblemParams& p) {
  const int n = static_cast<int>(g.n_total());
  Matrix m0 = assemble_system(g, p, Potential());
  Eigen::PartialPivLU<Matrix> lu(m0);
  Matrix g0 = lu.solve(Matrix::Identity(n, n));
  check_residual(m0, g0, Matrix::Identity(n, n), "background_green");
  return GreenTable(std::move(g0), g);
}

Measurement robin_to_dirichlet(const Graph& g, const ProblemParams& p,
                               const Potential& eta) {
  const int nv = static_cast<int>(g.n_interior());
  const int nb = static_cast<int>(g.n_boundary());
  const auto& sources = g.sources();
  const auto& receivers = g.receivers();

  if (eta.size() != 0 && eta.minCoeff() < 0.0)
    throw ValidationError(ValidationError::Code::precondition,
                          "eta must be non-negative");

  Matrix m = assemble_system(g, p, eta);
  Matrix rhs = Matrix::Zero(nv + nb, sources.size());
  for (std::size_t j = 0; j < sources.size(); ++j) rhs(nv + sources[j], j) = 1.0;

  Eigen::PartialPivLU<Matrix> lu(m);
  Matrix sol = lu.solve(rhs);
  check_residual(m, sol, rhs, "robin_to_dirichlet");

  Measurement out;
  out.lambda.resize(receivers.size(), sources.size());
  for (std::size_t i = 0; i < receivers.size(); ++i)
    out.lambda.row(i) = sol.row(nv + receivers[i]);

  Matrix m0 = assemble_system(g, p, Potential());
  Eigen::PartialPivLU<Matrix> lu0(m0);
  Matrix rhs_cols = lu0.solve(rhs);
  check_residual(m0, rhs_cols, rhs, "robin_to_dirichlet background");
  out.background.resize(receivers.size(), sources.size());
  for (std::size_t i = 0; i < receivers.size(); ++i)
    out.background.row(i) = rhs_cols.row(nv + receivers[i]);
  return out;
}

ScatterVec scattering_data(const Measurement& m) {
  if (m.lambda.rows() != m.background.rows() ||
      m.lambda.cols() != m.background.cols())
    throw ValidationError(ValidationError::Code::shape_mismatch,
                          "lambda and background shapes differ");
  const Eigen::Index nr = m.lambda.rows();
  const Eigen::Index ns = m.lambda.cols();
  ScatterVec phi(nr * ns);
  for (Eigen::Index r = 0; r < nr; ++r)
    for (Eigen::Index s = 0; s < ns; ++s)
      phi(r * ns + s) = m.background(r, s) - m.lambda(r, s);
  return phi;
}

}  // namespace gtomo
