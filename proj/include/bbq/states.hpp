#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "bbq/spectra.hpp"

namespace bbq {

/// Density operator on a tensor-product space. dims lists the local
/// dimensions of the factors, e.g. [3,3,3] for three sites or the
/// coarse-grained [3, 3^(L-1)] for a site-vs-rest split. The chain's states
/// are real in the S_z product basis, so the matrix is real symmetric.
struct DensityMatrix {
  std::vector<std::int64_t> dims;
  Eigen::MatrixXd matrix;
  std::string label;
  bool degenerate = false;  // set when built from a degenerate ground manifold

  std::int64_t dim() const;

  /// Hermiticity / unit trace / positivity checks (tolerance 1e-10);
  /// throws config_error on violation.
  void validate() const;
};

/// Split of the factor indices of a DensityMatrix (1-based, ascending) into
/// two nonempty disjoint covering groups.
struct Bipartition {
  std::vector<int> left;
  std::vector<int> right;

  /// {1..n_left} | {n_left+1..n_factors}
  static Bipartition leading(int n_left, int n_factors);

  /// True when left and right are contiguous index ranges with left first.
  bool contiguous(int n_factors) const;
  void validate(int n_factors) const;
};

/// Pure projector for a unique ground state; uniform mixture P/g over the
/// manifold when degenerate (the T -> 0 limit of the thermal state), with
/// the `degenerate` flag set. dims is the full site factorization [3,...,3].
DensityMatrix ground_state_density(const GroundSpace& gs);

/// rho(T): Gibbs weights exp(-(E_n - E0)/T) normalized to unit trace
/// (k_B = 1, ground-energy shifted). Requires a complete spectrum with
/// eigenvectors and T > 0.
DensityMatrix thermal_state(const Spectrum& spectrum, double temperature);

/// Reduced state on keep_sites (1-based factor indices of rho.dims, any
/// subset, output factors in ascending order).
DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep_sites);

/// Transpose on the right factor group of a contiguous bipartition:
/// (a,b; a',b') -> (a,b'; a',b). Result is symmetric with trace 1 but not
/// necessarily positive. Non-contiguous bipartitions are rejected.
Eigen::MatrixXd partial_transpose(const DensityMatrix& rho, const Bipartition& bipart);

/// Reduced state of sum_s w_s |psi_s><psi_s| computed from the factors
/// without materializing the full matrix; columns of `vectors` live on the
/// product space described by dims.
DensityMatrix reduced_from_factors(const Eigen::MatrixXd& vectors, const Eigen::VectorXd& weights,
                                   const std::vector<std::int64_t>& dims,
                                   const std::vector<int>& keep_sites);

}  // namespace bbq
