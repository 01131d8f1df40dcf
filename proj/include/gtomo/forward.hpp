#pragma once

#include "gtomo/graph.hpp"
#include "gtomo/types.hpp"

namespace gtomo {

/// Background Green's function for the zero-potential problem: the exact
/// inverse of the assembled system matrix, indexed (interior, boundary).
/// Entry (i, j) is the solution at vertex i for a unit source at vertex j.
class GreenTable {
public:
  GreenTable(Matrix g0, const Graph& g);

  const Matrix& full() const { return g0_; }

  std::size_t n_interior() const { return nv_; }
  std::size_t n_sources() const { return source_rows_.size(); }
  std::size_t n_receivers() const { return receiver_rows_.size(); }

  /// Interior-interior block G0[V;V].
  Matrix block_vv() const;
  /// Receiver-interior block G0[R;V] (rows in receiver order).
  Matrix block_rv() const;
  /// Interior-source block G0[V;S] (columns in source order).
  Matrix block_vs() const;
  /// Receiver-source block G0[R;S], the background measurement.
  Matrix block_rs() const;

  /// Generic block: rows/cols are global indices into (interior, boundary).
  Matrix block(const std::vector<int>& rows, const std::vector<int>& cols) const;

  /// Global row indices of receivers / sources in the full table.
  const std::vector<int>& receiver_rows() const { return receiver_rows_; }
  const std::vector<int>& source_rows() const { return source_rows_; }

private:
  Matrix g0_;
  std::size_t nv_;
  std::vector<int> receiver_rows_;
  std::vector<int> source_rows_;
};

/// Interior and boundary components of a direct solve.
struct DirectSolution {
  Vector interior;
  Vector boundary;
};

/// Robin-to-Dirichlet measurements: solution value at each receiver for a
/// unit source at each boundary source, alongside the zero-potential
/// background block.
struct Measurement {
  Matrix lambda;      // |R| x |S|
  Matrix background;  // |R| x |S|, equals G0[R;S]
};

/// Solves the assembled system for given interior source f and boundary
/// source g_b. Throws NumericError if the relative residual exceeds 1e-10.
/// Preconditions: eta >= 0 entrywise unless allow_negative_eta is set.
DirectSolution solve_direct(const Graph& g, const ProblemParams& p,
                            const Potential& eta, const Vector& interior_source,
                            const Vector& boundary_source,
                            bool allow_negative_eta = false);

/// Inverts the zero-potential system matrix column-block-wise and checks
/// M0 * G0 = I to 1e-10 max-abs.
GreenTable background_green(const Graph& g, const ProblemParams& p);

/// One direct solve per source; lambda column s holds the receiver values.
Measurement robin_to_dirichlet(const Graph& g, const ProblemParams& p,
                               const Potential& eta);

/// phi = vec(background - lambda), receiver-major.
ScatterVec scattering_data(const Measurement& m);

}  // namespace gtomo
