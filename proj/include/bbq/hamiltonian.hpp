#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <vector>

namespace bbq {

enum class Boundary { Periodic, Open };

/// One chain instance: site count, boundary condition, coupling angle.
///
/// theta is normalized into [-pi, pi) on construction. Basis convention used
/// throughout: site 1 is the most significant base-3 digit of the basis index
/// and digit 0 <-> m = +1 (so digit d at a site means m = 1 - d).
///
/// Caution: Periodic with length = 2 sums the bonds (1,2) and (2,1), i.e. the
/// single physical bond is counted twice, matching the literal Hamiltonian sum.
struct SpinChainSpec {
  int length = 2;
  Boundary boundary = Boundary::Periodic;
  double theta = 0.0;

  SpinChainSpec() = default;
  SpinChainSpec(int length, Boundary boundary, double theta);

  int bond_count() const { return boundary == Boundary::Periodic ? length : length - 1; }
};

std::int64_t pow3(int n);

/// Two-site term cos(theta) * (S.S) + sin(theta) * (S.S)^2 on a pair of
/// spin-1 sites; real symmetric 9x9 in the product basis.
Eigen::Matrix<double, 9, 9> bond_operator(double theta);

struct CooEntry {
  std::int64_t row;
  std::int64_t col;
  double value;
};

/// Real symmetric sparse operator (CSR, both triangles stored). The sparsity
/// pattern may be shared between operators that differ only in values, which
/// is what makes theta sweeps cheap. apply() is the OpenMP row-parallel
/// kernel; apply_serial() is the reference implementation kept for testing.
class SparseSymmetricOperator {
 public:
  SparseSymmetricOperator() = default;

  /// Builds from coordinate entries (duplicates are summed). Entries must
  /// describe a symmetric matrix; symmetry is the caller's contract and is
  /// verified by tests, not per call.
  static SparseSymmetricOperator from_coo(std::int64_t dim, std::vector<CooEntry> entries);

  std::int64_t dim() const { return dim_; }
  std::int64_t nnz() const { return cols_ ? static_cast<std::int64_t>(cols_->size()) : 0; }

  void apply(const double* x, double* y) const;
  void apply_serial(const double* x, double* y) const;
  Eigen::VectorXd apply(const Eigen::VectorXd& v) const;
  Eigen::VectorXd apply_serial(const Eigen::VectorXd& v) const;

  std::vector<CooEntry> coo() const;
  Eigen::MatrixXd dense() const;
  double trace() const;

  /// Same pattern, new values (ca * this->values + cb * other.values).
  /// Requires identical shared patterns.
  SparseSymmetricOperator combine(double ca, const SparseSymmetricOperator& other, double cb) const;

 private:
  friend class ChainTerms;

  std::int64_t dim_ = 0;
  std::shared_ptr<const std::vector<std::int64_t>> row_ptr_;
  std::shared_ptr<const std::vector<std::int32_t>> cols_;
  std::vector<double> vals_;
};

/// Bilinear and biquadratic chain operators assembled once per (length,
/// boundary); hamiltonian(theta) recombines values on the shared pattern.
class ChainTerms {
 public:
  ChainTerms(int length, Boundary boundary);

  const SparseSymmetricOperator& bilinear() const { return bilinear_; }
  const SparseSymmetricOperator& biquadratic() const { return biquadratic_; }
  SparseSymmetricOperator hamiltonian(double theta) const;

  int length() const { return length_; }
  Boundary boundary() const { return boundary_; }

 private:
  int length_;
  Boundary boundary_;
  SparseSymmetricOperator bilinear_;
  SparseSymmetricOperator biquadratic_;
};

/// H = sum over bonds of bond_operator(theta) embedded at (i, i+1); the wrap
/// bond (L, 1) is included for periodic boundaries. Guarded to 2 <= L <= 12.
SparseSymmetricOperator build_hamiltonian(const SpinChainSpec& spec);

}  // namespace bbq
