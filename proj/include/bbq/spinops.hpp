#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace bbq {

/// Spin-1 operators in the S_z eigenbasis, basis order (m = +1, 0, -1),
/// dimensionless (hbar = 1).
struct SpinOperators {
  Eigen::Matrix3cd sx;
  Eigen::Matrix3cd sy;
  Eigen::Matrix3cd sz;
};

SpinOperators spin1_operators();

enum class GeneratorKind { SO, SU };

/// Ordered basis of traceless Hermitian generators with tr(G_i G_j) = 2 delta_ij.
///
/// SO: the d(d-1)/2 matrices L^(jk) = -i(|j><k| - |k><j|), 0 <= j < k < d,
///     ordered lexicographically by (j, k). For d = 2 this is just sigma_y.
/// SU: the d^2-1 generalized Gell-Mann matrices, ordered as
///       [ symmetric (j,k) lex | antisymmetric (j,k) lex | diagonal l = 1..d-1 ],
///     so the SO set is the contiguous block starting at offset d(d-1)/2.
struct GeneratorSet {
  int dim = 0;
  GeneratorKind kind = GeneratorKind::SO;
  std::vector<Eigen::MatrixXcd> generators;
};

/// Throws config_error for d < 2, resource_limit_error for d > 256
/// (composite-space generator families are streamed, never materialized).
GeneratorSet so_generators(int d);
GeneratorSet su_generators(int d);

}  // namespace bbq
