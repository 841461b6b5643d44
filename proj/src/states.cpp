#include "bbq/states.hpp"

#include <algorithm>
#include <cmath>

#include "bbq/errors.hpp"

namespace bbq {

namespace {

constexpr std::int64_t kDenseStateGuard = 6561;  // 3^8

std::vector<std::int64_t> site_dims_for(std::int64_t dim) {
  // chain states live on products of qutrits; fall back to one coarse factor
  std::vector<std::int64_t> dims;
  std::int64_t d = dim;
  while (d > 1 && d % 3 == 0) {
    dims.push_back(3);
    d /= 3;
  }
  if (d != 1) return {dim};
  return dims;
}

// stride of factor f (0-based) when factor 0 is the most significant index
std::vector<std::int64_t> factor_strides(const std::vector<std::int64_t>& dims) {
  std::vector<std::int64_t> s(dims.size(), 1);
  for (int f = static_cast<int>(dims.size()) - 2; f >= 0; --f) s[f] = s[f + 1] * dims[f + 1];
  return s;
}

void check_sites(const std::vector<int>& sites, std::size_t n_factors) {
  if (sites.empty()) throw config_error("site set must be nonempty");
  for (std::size_t i = 0; i < sites.size(); ++i) {
    if (sites[i] < 1 || sites[i] > static_cast<int>(n_factors))
      throw config_error("site index out of range");
    if (i > 0 && sites[i] <= sites[i - 1]) throw config_error("site set must be ascending and unique");
  }
}

// enumeration map: flat index over the chosen factors -> full-space index offset
std::vector<std::int64_t> index_map(const std::vector<int>& factors_1b,
                                    const std::vector<std::int64_t>& dims,
                                    const std::vector<std::int64_t>& strides) {
  std::int64_t total = 1;
  for (int f : factors_1b) total *= dims[f - 1];
  std::vector<std::int64_t> map(total);
  for (std::int64_t i = 0; i < total; ++i) {
    std::int64_t rem = i, off = 0;
    for (int pos = static_cast<int>(factors_1b.size()) - 1; pos >= 0; --pos) {
      const int f = factors_1b[pos] - 1;
      off += (rem % dims[f]) * strides[f];
      rem /= dims[f];
    }
    map[i] = off;
  }
  return map;
}

}  // namespace

std::int64_t DensityMatrix::dim() const {
  std::int64_t d = 1;
  for (std::int64_t f : dims) d *= f;
  return d;
}

void DensityMatrix::validate() const {
  const double tol = 1e-10;
  if (matrix.rows() != matrix.cols() || matrix.rows() != dim())
    throw config_error("density matrix: dimension does not match factorization");
  const double asym = (matrix - matrix.transpose()).cwiseAbs().maxCoeff();
  if (asym > tol) throw config_error("density matrix: not symmetric");
  if (std::abs(matrix.trace() - 1.0) > tol) throw config_error("density matrix: trace != 1");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(matrix, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -tol) throw config_error("density matrix: negative eigenvalue");
}

Bipartition Bipartition::leading(int n_left, int n_factors) {
  if (n_left < 1 || n_left >= n_factors) throw config_error("bipartition: empty side");
  Bipartition b;
  for (int i = 1; i <= n_left; ++i) b.left.push_back(i);
  for (int i = n_left + 1; i <= n_factors; ++i) b.right.push_back(i);
  return b;
}

bool Bipartition::contiguous(int n_factors) const {
  const int nl = static_cast<int>(left.size());
  for (int i = 0; i < nl; ++i)
    if (left[i] != i + 1) return false;
  for (int i = 0; i < static_cast<int>(right.size()); ++i)
    if (right[i] != nl + i + 1) return false;
  return nl + static_cast<int>(right.size()) == n_factors;
}

void Bipartition::validate(int n_factors) const {
  if (left.empty() || right.empty()) throw config_error("bipartition: both sides must be nonempty");
  std::vector<int> all = left;
  all.insert(all.end(), right.begin(), right.end());
  std::sort(all.begin(), all.end());
  for (int i = 0; i < n_factors; ++i)
    if (i >= static_cast<int>(all.size()) || all[i] != i + 1)
      throw config_error("bipartition: sides must disjointly cover all factors");
  if (static_cast<int>(all.size()) != n_factors)
    throw config_error("bipartition: sides must disjointly cover all factors");
}

DensityMatrix ground_state_density(const GroundSpace& gs) {
  if (gs.degeneracy < 1 || gs.vectors.cols() != gs.degeneracy)
    throw config_error("ground_state_density: invalid ground space");
  const std::int64_t n = gs.vectors.rows();
  if (n > kDenseStateGuard)
    throw resource_limit_error("dense density matrices guarded to dimension 6561; use factor-based paths");
  DensityMatrix rho;
  rho.dims = site_dims_for(n);
  rho.matrix = (gs.vectors * gs.vectors.transpose()) / static_cast<double>(gs.degeneracy);
  rho.label = gs.degeneracy == 1 ? "ground" : "ground (uniform mixture over degenerate manifold)";
  rho.degenerate = gs.degeneracy > 1;
  return rho;
}

DensityMatrix thermal_state(const Spectrum& spectrum, double temperature) {
  if (temperature <= 0.0)
    throw config_error("thermal_state: temperature must be > 0 (use ground_state_density at T = 0)");
  if (!spectrum.complete || !spectrum.has_vectors())
    throw config_error("thermal_state: complete spectrum with eigenvectors required");
  const std::int64_t n = spectrum.eigenvalues.size();
  if (n > kDenseStateGuard)
    throw resource_limit_error("thermal states guarded to dimension 6561");

  const double e0 = spectrum.eigenvalues(0);
  Eigen::VectorXd w(n);
  for (std::int64_t i = 0; i < n; ++i) w(i) = std::exp(-(spectrum.eigenvalues(i) - e0) / temperature);
  w /= w.sum();

  // weights below double-precision underflow are exact zeros; skip their columns
  std::int64_t r = 0;
  while (r < n && w(r) > 0.0) ++r;
  const auto v = spectrum.eigenvectors.leftCols(r);
  DensityMatrix rho;
  rho.dims = site_dims_for(n);
  rho.matrix = v * w.head(r).asDiagonal() * v.transpose();
  rho.label = "thermal";
  return rho;
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep_sites) {
  const int nf = static_cast<int>(rho.dims.size());
  check_sites(keep_sites, nf);
  std::vector<int> traced;
  for (int f = 1; f <= nf; ++f)
    if (std::find(keep_sites.begin(), keep_sites.end(), f) == keep_sites.end()) traced.push_back(f);

  const auto strides = factor_strides(rho.dims);
  const auto map_k = index_map(keep_sites, rho.dims, strides);
  const std::int64_t dk = static_cast<std::int64_t>(map_k.size());

  DensityMatrix out;
  for (int f : keep_sites) out.dims.push_back(rho.dims[f - 1]);
  out.label = rho.label;
  out.degenerate = rho.degenerate;
  out.matrix = Eigen::MatrixXd::Zero(dk, dk);

  if (traced.empty()) {
    out.matrix = rho.matrix;
    return out;
  }
  const auto map_t = index_map(traced, rho.dims, strides);
#pragma omp parallel for schedule(static) if (dk > 64)
  for (std::int64_t i = 0; i < dk; ++i)
    for (std::int64_t j = 0; j < dk; ++j) {
      double acc = 0.0;
      for (const std::int64_t t : map_t) acc += rho.matrix(map_k[i] + t, map_k[j] + t);
      out.matrix(i, j) = acc;
    }
  return out;
}

Eigen::MatrixXd partial_transpose(const DensityMatrix& rho, const Bipartition& bipart) {
  const int nf = static_cast<int>(rho.dims.size());
  bipart.validate(nf);
  if (!bipart.contiguous(nf))
    throw config_error("partial_transpose: non-contiguous bipartition unsupported; re-factorize first");
  std::int64_t da = 1, db = 1;
  for (int f : bipart.left) da *= rho.dims[f - 1];
  for (int f : bipart.right) db *= rho.dims[f - 1];

  const Eigen::MatrixXd& m = rho.matrix;
  Eigen::MatrixXd out(da * db, da * db);
#pragma omp parallel for schedule(static) if (da * db > 256)
  for (std::int64_t a = 0; a < da; ++a)
    for (std::int64_t ap = 0; ap < da; ++ap)
      for (std::int64_t b = 0; b < db; ++b)
        for (std::int64_t bp = 0; bp < db; ++bp)
          out(a * db + b, ap * db + bp) = m(a * db + bp, ap * db + b);
  return out;
}

DensityMatrix reduced_from_factors(const Eigen::MatrixXd& vectors, const Eigen::VectorXd& weights,
                                   const std::vector<std::int64_t>& dims,
                                   const std::vector<int>& keep_sites) {
  const int nf = static_cast<int>(dims.size());
  check_sites(keep_sites, nf);
  if (vectors.cols() != weights.size() || vectors.cols() == 0)
    throw config_error("reduced_from_factors: factor/weight mismatch");
  std::int64_t full = 1;
  for (std::int64_t d : dims) full *= d;
  if (vectors.rows() != full) throw config_error("reduced_from_factors: dims do not match vectors");

  std::vector<int> rest;
  for (int f = 1; f <= nf; ++f)
    if (std::find(keep_sites.begin(), keep_sites.end(), f) == keep_sites.end()) rest.push_back(f);

  const auto strides = factor_strides(dims);
  const auto map_k = index_map(keep_sites, dims, strides);
  const std::int64_t dk = static_cast<std::int64_t>(map_k.size());

  DensityMatrix out;
  for (int f : keep_sites) out.dims.push_back(dims[f - 1]);
  out.matrix = Eigen::MatrixXd::Zero(dk, dk);
  out.label = "reduced";

  if (rest.empty()) {
    for (Eigen::Index s = 0; s < vectors.cols(); ++s)
      out.matrix += weights(s) * vectors.col(s) * vectors.col(s).transpose();
    return out;
  }
  const auto map_r = index_map(rest, dims, strides);
  const std::int64_t dr = static_cast<std::int64_t>(map_r.size());
  Eigen::MatrixXd m(dk, dr);
  for (Eigen::Index s = 0; s < vectors.cols(); ++s) {
    for (std::int64_t i = 0; i < dk; ++i)
      for (std::int64_t j = 0; j < dr; ++j) m(i, j) = vectors(map_k[i] + map_r[j], s);
    out.matrix.noalias() += weights(s) * m * m.transpose();
  }
  return out;
}

}  // namespace bbq
