#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "bbq/hamiltonian.hpp"

namespace bbq {

/// Eigenvalues ascending; eigenvectors (when present) are the matching
/// orthonormal columns. complete == true means every eigenpair of the
/// operator is present.
struct Spectrum {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;  // 0 columns when not computed
  bool complete = false;

  bool has_vectors() const { return eigenvectors.cols() > 0; }
};

struct DenseEighOptions {
  std::int64_t dim_guard = 6561;  // 3^8
  bool force = false;             // override the guard
  bool vectors = true;
};

/// Full symmetric eigendecomposition (LAPACK dsyevd).
Spectrum dense_eigh(const SparseSymmetricOperator& h, const DenseEighOptions& opts = {});

/// Dense input variant; consumes the matrix as scratch.
Spectrum dense_eigh(Eigen::MatrixXd a, bool vectors = true);

struct LanczosOptions {
  double tol = 1e-10;  // accepted residual: ||Hx - ex|| <= tol * (1 + |e|)
  std::uint64_t seed = 0x5eed5eed5eedULL;
  int max_iter = 0;      // per restart; 0 = automatic
  int max_restarts = 0;  // 0 = automatic
};

/// k lowest eigenpairs by restarted Lanczos with full reorthogonalization.
/// Converged pairs are locked and deflated, so exactly degenerate multiplets
/// are resolved one copy per restart. Deterministic for a fixed seed.
/// Throws convergence_error(best residual) at the iteration cap.
Spectrum lanczos_extremal(const SparseSymmetricOperator& h, int k, const LanczosOptions& opts = {});

/// Orthonormal basis of the lowest near-degenerate eigenspace.
struct GroundSpace {
  double energy = 0.0;
  Eigen::MatrixXd vectors;  // dim x degeneracy
  int degeneracy = 0;
};

/// Collects eigenvectors with E - E0 <= degeneracy_tol * (1 + |E0|).
/// The spectrum must carry eigenvectors.
GroundSpace ground_space(const Spectrum& spectrum, double degeneracy_tol = 1e-9);

/// Ground space via Lanczos with adaptive subspace size: request 6 pairs and
/// expand until an energy gap separates the lowest multiplet or k reaches
/// 2L + 3 (enough for the ferromagnetic multiplet of 2L + 1 states).
GroundSpace solve_ground_space(const SparseSymmetricOperator& h, int length,
                               const LanczosOptions& opts = {}, double degeneracy_tol = 1e-9);

}  // namespace bbq
