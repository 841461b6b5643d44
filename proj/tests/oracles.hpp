// Independent reference implementations used to compute expected values.
// Everything here is deliberately written the slow, obvious way and stays
// independent of the library's computational paths.
#pragma once

#include <Eigen/Dense>
#include <complex>
#include <random>
#include <vector>

#include "bbq/hamiltonian.hpp"
#include "bbq/spinops.hpp"
#include "bbq/states.hpp"

namespace oracle {

inline Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline Eigen::MatrixXd kron_real(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// dense chain Hamiltonian assembled from single-site operators, independent
// of the library's block-embedding path
inline Eigen::MatrixXd dense_chain(int length, bbq::Boundary boundary, double theta) {
  const bbq::SpinOperators s = bbq::spin1_operators();
  const std::int64_t dim = bbq::pow3(length);
  auto site_op = [&](const Eigen::MatrixXcd& op, int site) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(1, 1);
    for (int i = 1; i <= length; ++i)
      m = kron(m, i == site ? op : Eigen::MatrixXcd::Identity(3, 3));
    return m;
  };
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  const int nbonds = boundary == bbq::Boundary::Periodic ? length : length - 1;
  for (int b = 0; b < nbonds; ++b) {
    const int u = b + 1;
    const int v = (b + 1) % length + 1;
    Eigen::MatrixXcd ss = Eigen::MatrixXcd::Zero(dim, dim);
    for (const auto* op : {&s.sx, &s.sy, &s.sz}) ss += site_op(*op, u) * site_op(*op, v);
    h += std::cos(theta) * ss + std::sin(theta) * (ss * ss);
  }
  return h.real();
}

// nested-loop partial trace; factor 1 carries the most significant index
inline Eigen::MatrixXd partial_trace_brute(const Eigen::MatrixXd& rho,
                                           const std::vector<std::int64_t>& dims,
                                           const std::vector<int>& keep) {
  const int nf = static_cast<int>(dims.size());
  std::vector<std::int64_t> strides(nf, 1);
  for (int f = nf - 2; f >= 0; --f) strides[f] = strides[f + 1] * dims[f + 1];

  std::int64_t dk = 1, full = 1;
  for (int f : keep) dk *= dims[f - 1];
  for (std::int64_t d : dims) full *= d;

  auto digits_of = [&](std::int64_t idx) {
    std::vector<std::int64_t> dg(nf);
    for (int f = 0; f < nf; ++f) dg[f] = (idx / strides[f]) % dims[f];
    return dg;
  };
  auto kept_index = [&](const std::vector<std::int64_t>& dg) {
    std::int64_t out = 0;
    for (int f : keep) out = out * dims[f - 1] + dg[f - 1];
    return out;
  };
  auto is_kept = [&](int f0) {
    for (int f : keep)
      if (f - 1 == f0) return true;
    return false;
  };

  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(dk, dk);
  for (std::int64_t r = 0; r < full; ++r) {
    const auto dr = digits_of(r);
    for (std::int64_t c = 0; c < full; ++c) {
      const auto dc = digits_of(c);
      bool diagonal_on_traced = true;
      for (int f = 0; f < nf; ++f)
        if (!is_kept(f) && dr[f] != dc[f]) {
          diagonal_on_traced = false;
          break;
        }
      if (diagonal_on_traced) out(kept_index(dr), kept_index(dc)) += rho(r, c);
    }
  }
  return out;
}

inline Eigen::VectorXd random_unit(std::int64_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  Eigen::VectorXd v(n);
  for (std::int64_t i = 0; i < n; ++i) v(i) = gauss(rng);
  v.normalize();
  return v;
}

inline Eigen::MatrixXd random_orthogonal(std::int64_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  Eigen::MatrixXd a(n, n);
  for (std::int64_t i = 0; i < n; ++i)
    for (std::int64_t j = 0; j < n; ++j) a(i, j) = gauss(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  Eigen::MatrixXd q = qr.householderQ();
  return q;
}

inline bbq::DensityMatrix random_density(const std::vector<std::int64_t>& dims,
                                         std::mt19937_64& rng, int rank = 0) {
  std::int64_t n = 1;
  for (std::int64_t d : dims) n *= d;
  if (rank <= 0) rank = static_cast<int>(n);
  std::normal_distribution<double> gauss;
  Eigen::MatrixXd a(n, rank);
  for (std::int64_t i = 0; i < n; ++i)
    for (int j = 0; j < rank; ++j) a(i, j) = gauss(rng);
  bbq::DensityMatrix rho;
  rho.dims = dims;
  rho.matrix = a * a.transpose();
  rho.matrix /= rho.matrix.trace();
  rho.label = "random";
  return rho;
}

// convex mixture of product states: separable by construction
inline bbq::DensityMatrix random_separable(std::int64_t da, std::int64_t db, int terms,
                                           std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uni(0.1, 1.0);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(da * db, da * db);
  double z = 0.0;
  for (int t = 0; t < terms; ++t) {
    const Eigen::VectorXd a = random_unit(da, rng);
    const Eigen::VectorXd b = random_unit(db, rng);
    const double p = uni(rng);
    m += p * kron_real(a * a.transpose(), b * b.transpose());
    z += p;
  }
  bbq::DensityMatrix rho;
  rho.dims = {da, db};
  rho.matrix = m / z;
  rho.label = "separable";
  return rho;
}

}  // namespace oracle
