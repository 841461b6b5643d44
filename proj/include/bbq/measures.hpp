#pragma once

#include <Eigen/Dense>
#include <optional>

#include "bbq/states.hpp"

namespace bbq {

/// Concurrence-vector result. components(a, b) = C_ab >= 0 for generator
/// pair (a, b); omitted on streamed paths where the pair set is huge.
struct ConcurrenceResult {
  double norm_squared = 0.0;
  std::optional<Eigen::MatrixXd> components;

  double norm() const;
};

/// Coherence-vector decomposition: local Bloch vectors and the correlation
/// tensor K over the SU(d_A) x SU(d_B) generator bases.
struct CoherenceDecomposition {
  int dim_a = 0;
  int dim_b = 0;
  Eigen::VectorXd bloch_a;   // length d_A^2 - 1
  Eigen::VectorXd bloch_b;   // length d_B^2 - 1
  Eigen::MatrixXd k_tensor;  // (d_A^2 - 1) x (d_B^2 - 1)
};

/// Total / classical / quantum correlations from the criterion-matrix
/// eigenvalues (sorted descending by absolute value); total = classical +
/// quantum holds exactly by the index split.
struct ZhouCorrelations {
  double total = 0.0;
  double classical = 0.0;
  double quantum = 0.0;
  Eigen::VectorXd criterion_eigenvalues;
};

/// Sum of |negative eigenvalues| of the partial transpose, with eigenvalues
/// above -1e-10 treated as zero. 0 signals PPT.
double negativity(const DensityMatrix& rho, const Bipartition& bipart);

/// Two-qubit concurrence max{0, l1 - l2 - l3 - l4} (validation utility).
double wootters_concurrence(const DensityMatrix& rho);

/// -x ln x - (1-x) ln(1-x) in nats, with H(0) = H(1) = 0.
double binary_entropy(double x);

/// Two-qubit entanglement of formation from the concurrence.
double eof_two_qubit(const DensityMatrix& rho);

/// Concurrence vector over SO(d_A) x SO(d_B) generator pairs for a mixed
/// state. Dense path guarded to d_A * d_B <= 81; larger spaces must use
/// pure_concurrence or concurrence_low_rank.
ConcurrenceResult generalized_concurrence(const DensityMatrix& rho, const Bipartition& bipart);

/// Rank-1 shortcut: C_ab = |<psi| L_a x L_b |psi*>|. Generator pairs are
/// streamed, never materialized, so the right factor may be as large as
/// 3^(L-1). Components are attached only for small pair sets.
ConcurrenceResult pure_concurrence(const Eigen::VectorXd& psi, const std::vector<std::int64_t>& dims,
                                   const Bipartition& bipart);

/// Concurrence vector of sum_s w_s |psi_s><psi_s| using the rank-reduced
/// eigenproblem per generator pair (exact; pairs streamed). `parallel`
/// selects the OpenMP kernel; the serial kernel is the reference.
ConcurrenceResult concurrence_low_rank(const Eigen::MatrixXd& vectors, const Eigen::VectorXd& weights,
                                       std::int64_t dim_a, bool parallel = true);

/// Negativity of a low-rank mixture across the leading-factor bipartition,
/// via the projected partial transpose (exact).
double negativity_low_rank(const Eigen::MatrixXd& vectors, const Eigen::VectorXd& weights,
                           std::int64_t dim_a);

/// -sum p ln p over the spectrum (nats); eigenvalues below 1e-12 are
/// treated as exact zeros.
double von_neumann_entropy(const DensityMatrix& rho);

/// Descending singular values of the bipartite coefficient matrix of a
/// normalized pure state; contiguous bipartition required.
Eigen::VectorXd schmidt_coefficients(const Eigen::VectorXd& psi, const std::vector<std::int64_t>& dims,
                                     const Bipartition& bipart);

/// Bloch vectors and correlation tensor of a two-factor state.
CoherenceDecomposition coherence_decomposition(const DensityMatrix& rho);

/// Criterion matrix KK^T - |lambda_B|^2 lambda_A lambda_A^T diagonalized;
/// eigenvalues sorted descending by |value|, split after d_A - 1 entries.
ZhouCorrelations zhou_correlations(const CoherenceDecomposition& decomp);

}  // namespace bbq
