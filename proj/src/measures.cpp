#include "bbq/measures.hpp"

#include <algorithm>
#include <cmath>

#include "bbq/errors.hpp"
#include "bbq/spinops.hpp"
#include "bbq/spectra.hpp"

namespace bbq {

namespace {

constexpr double kNegativityFloor = 1e-10;
constexpr double kEntropyFloor = 1e-12;
constexpr std::int64_t kMixedConcurrenceGuard = 81;  // d_A * d_B for the dense mixed path
constexpr double kNormTol = 1e-8;

Eigen::VectorXd symmetric_eigenvalues(const Eigen::MatrixXd& m) {
  if (m.rows() >= 256) return dense_eigh(m, false).eigenvalues;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

Eigen::MatrixXd matrix_sqrt_psd(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  Eigen::VectorXd d = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().transpose();
}

void split_dims(const DensityMatrix& rho, const Bipartition& bipart, std::int64_t& da,
                std::int64_t& db) {
  const int nf = static_cast<int>(rho.dims.size());
  bipart.validate(nf);
  if (!bipart.contiguous(nf))
    throw config_error("measure requires a contiguous bipartition; re-factorize first");
  da = 1;
  db = 1;
  for (int f : bipart.left) da *= rho.dims[f - 1];
  for (int f : bipart.right) db *= rho.dims[f - 1];
}

// <psi_s| L_(jk) x L_(pq) |psi_t> for the SO generator phase convention
// L^(jk) = -i(|j><k| - |k><j|); M are the d_A x d_B reshapes of real states.
inline double so_pair_element(const Eigen::MatrixXd& ms, const Eigen::MatrixXd& mt, int j, int k,
                              std::int64_t p, std::int64_t q) {
  return -(ms(j, p) * mt(k, q) + ms(k, q) * mt(j, p) - ms(j, q) * mt(k, p) - ms(k, p) * mt(j, q));
}

struct PairAccumulator {
  double sum = 0.0;
  double comp = 0.0;  // Kahan carry
  void add(double x) {
    const double y = x - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
};

}  // namespace

double ConcurrenceResult::norm() const { return std::sqrt(std::max(norm_squared, 0.0)); }

double negativity(const DensityMatrix& rho, const Bipartition& bipart) {
  const Eigen::MatrixXd pt = partial_transpose(rho, bipart);
  const Eigen::VectorXd ev = symmetric_eigenvalues(pt);
  double n = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (ev(i) < -kNegativityFloor) n -= ev(i);
  return n;
}

double negativity_low_rank(const Eigen::MatrixXd& vectors, const Eigen::VectorXd& weights,
                           std::int64_t dim_a) {
  const std::int64_t n = vectors.rows();
  if (dim_a < 2 || n % dim_a != 0) throw config_error("negativity_low_rank: bad dim_a");
  const std::int64_t db = n / dim_a;
  const Eigen::Index g = vectors.cols();
  if (g != weights.size() || g == 0) throw config_error("negativity_low_rank: factor/weight mismatch");

  using RowMajorMap = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
  if (g == 1) {
    // pure state: partial-transpose spectrum is {s_i^2, +-s_i s_j} over the
    // Schmidt values, so N = sum_{i<j} s_i s_j
    RowMajorMap m(vectors.col(0).data(), dim_a, db);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    const Eigen::VectorXd s = svd.singularValues();
    double acc = 0.0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
      for (Eigen::Index j = i + 1; j < s.size(); ++j)
        if (s(i) * s(j) > kNegativityFloor) acc += s(i) * s(j);
    return acc;
  }

  // the PT spectrum of a rank-g mixture is supported on A x span{rows of M_s};
  // project onto that span and transpose there (exact for real factors)
  Eigen::MatrixXd rows(db, dim_a * g);
  for (Eigen::Index s = 0; s < g; ++s) {
    RowMajorMap m(vectors.col(s).data(), dim_a, db);
    rows.middleCols(s * dim_a, dim_a) = m.transpose();
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(rows);
  const std::int64_t r = std::min<std::int64_t>(qr.rank(), db);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(db, r);

  Eigen::MatrixXd rho_p = Eigen::MatrixXd::Zero(dim_a * r, dim_a * r);
  for (Eigen::Index s = 0; s < g; ++s) {
    RowMajorMap m(vectors.col(s).data(), dim_a, db);
    Eigen::MatrixXd mp = m * q;  // dim_a x r
    Eigen::VectorXd vec(dim_a * r);  // row-major flatten: index = a*r + b
    for (std::int64_t a = 0; a < dim_a; ++a)
      for (std::int64_t b = 0; b < r; ++b) vec(a * r + b) = mp(a, b);
    rho_p.noalias() += weights(s) * vec * vec.transpose();
  }
  DensityMatrix proj;
  proj.dims = {dim_a, r};
  proj.matrix = std::move(rho_p);
  const Eigen::MatrixXd pt = partial_transpose(proj, Bipartition::leading(1, 2));
  const Eigen::VectorXd ev = symmetric_eigenvalues(pt);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (ev(i) < -kNegativityFloor) acc -= ev(i);
  return acc;
}

double wootters_concurrence(const DensityMatrix& rho) {
  if (rho.dims != std::vector<std::int64_t>{2, 2})
    throw config_error("wootters_concurrence: two-qubit state required");
  Eigen::Matrix4d syy = Eigen::Matrix4d::Zero();
  syy(0, 3) = -1; syy(1, 2) = 1; syy(2, 1) = 1; syy(3, 0) = -1;
  const Eigen::MatrixXd sq = matrix_sqrt_psd(rho.matrix);
  // eig(rho S rho* S) = eig(sqrt(rho) S sqrt(rho))^2 for real rho
  Eigen::VectorXd lam = symmetric_eigenvalues(sq * syy * sq).cwiseAbs();
  std::sort(lam.data(), lam.data() + lam.size(), std::greater<double>());
  return std::max(0.0, lam(0) - lam(1) - lam(2) - lam(3));
}

double binary_entropy(double x) {
  if (x < -1e-12 || x > 1.0 + 1e-12) throw config_error("binary_entropy: argument outside [0, 1]");
  x = std::clamp(x, 0.0, 1.0);
  double h = 0.0;
  if (x > 0.0) h -= x * std::log(x);
  if (x < 1.0) h -= (1.0 - x) * std::log(1.0 - x);
  return h;
}

double eof_two_qubit(const DensityMatrix& rho) {
  const double c = wootters_concurrence(rho);
  return binary_entropy(0.5 + 0.5 * std::sqrt(std::max(0.0, 1.0 - c * c)));
}

ConcurrenceResult concurrence_low_rank(const Eigen::MatrixXd& vectors, const Eigen::VectorXd& weights,
                                       std::int64_t dim_a, bool parallel) {
  const std::int64_t n = vectors.rows();
  if (dim_a < 2 || n % dim_a != 0) throw config_error("concurrence_low_rank: bad dim_a");
  const std::int64_t db = n / dim_a;
  if (db < 2) throw config_error("concurrence_low_rank: right factor must have dimension >= 2");
  const Eigen::Index g = vectors.cols();
  if (g != weights.size() || g == 0) throw config_error("concurrence_low_rank: factor/weight mismatch");

  // row-major reshapes scaled by sqrt(w) so W_st = <s|G|t> sqrt(w_s w_t)
  std::vector<Eigen::MatrixXd> m(g);
  for (Eigen::Index s = 0; s < g; ++s) {
    m[s].resize(dim_a, db);
    const double* col = vectors.col(s).data();
    const double sw = std::sqrt(std::max(0.0, weights(s)));
    for (std::int64_t a = 0; a < dim_a; ++a)
      for (std::int64_t b = 0; b < db; ++b) m[s](a, b) = sw * col[a * db + b];
  }

  std::vector<std::pair<int, int>> pairs_a;
  for (int j = 0; j < dim_a; ++j)
    for (int k = j + 1; k < dim_a; ++k) pairs_a.emplace_back(j, k);
  const std::int64_t n_pairs_b = db * (db - 1) / 2;
  const bool want_components =
      static_cast<std::int64_t>(pairs_a.size()) * n_pairs_b <= 4096;
  Eigen::MatrixXd components;
  if (want_components) components.setZero(pairs_a.size(), n_pairs_b);

  // per-p partial sums give a fixed summation order for any thread count
  std::vector<double> acc(db, 0.0);

#pragma omp parallel for schedule(dynamic, 8) if (parallel)
  for (std::int64_t p = 0; p < db - 1; ++p) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    Eigen::MatrixXd w(g, g);
    PairAccumulator local;
    for (std::int64_t q = p + 1; q < db; ++q) {
      for (std::size_t ia = 0; ia < pairs_a.size(); ++ia) {
        const auto [j, k] = pairs_a[ia];
        double c;
        if (g == 1) {
          c = std::abs(so_pair_element(m[0], m[0], j, k, p, q));
        } else {
          for (Eigen::Index s = 0; s < g; ++s)
            for (Eigen::Index t = s; t < g; ++t) {
              const double v = so_pair_element(m[s], m[t], j, k, p, q);
              w(s, t) = v;
              w(t, s) = v;
            }
          es.compute(w, Eigen::EigenvaluesOnly);
          const Eigen::VectorXd lam = es.eigenvalues().cwiseAbs();
          c = 2.0 * lam.maxCoeff() - lam.sum();
        }
        if (c > 0.0) {
          local.add(c * c);
          if (want_components)
            components(ia, (db * (db - 1) / 2) - ((db - p) * (db - p - 1) / 2) + (q - p - 1)) = c;
        }
      }
    }
    acc[p] = local.sum;
  }

  PairAccumulator total;
  for (std::int64_t p = 0; p < db; ++p) total.add(acc[p]);

  ConcurrenceResult res;
  res.norm_squared = total.sum;
  if (want_components) res.components = std::move(components);
  return res;
}

ConcurrenceResult generalized_concurrence(const DensityMatrix& rho, const Bipartition& bipart) {
  std::int64_t da = 0, db = 0;
  split_dims(rho, bipart, da, db);
  if (da * db > kMixedConcurrenceGuard)
    throw resource_limit_error(
        "mixed-state generalized concurrence guarded to d_A*d_B <= 81; use the pure or low-rank path");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(rho.matrix);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()(i) > 1e-14) keep.push_back(i);
  if (keep.empty()) throw config_error("generalized_concurrence: zero state");
  Eigen::MatrixXd vecs(rho.matrix.rows(), keep.size());
  Eigen::VectorXd ws(keep.size());
  for (std::size_t i = 0; i < keep.size(); ++i) {
    vecs.col(i) = es.eigenvectors().col(keep[i]);
    ws(i) = es.eigenvalues()(keep[i]);
  }
  return concurrence_low_rank(vecs, ws, da, /*parallel=*/false);
}

ConcurrenceResult pure_concurrence(const Eigen::VectorXd& psi, const std::vector<std::int64_t>& dims,
                                   const Bipartition& bipart) {
  if (std::abs(psi.norm() - 1.0) > kNormTol)
    throw config_error("pure_concurrence: state must be normalized");
  DensityMatrix probe;
  probe.dims = dims;
  std::int64_t da = 0, db = 0;
  probe.matrix.resize(0, 0);  // split_dims only inspects dims
  split_dims(probe, bipart, da, db);
  if (da * db != psi.size()) throw config_error("pure_concurrence: dims do not match state");
  Eigen::VectorXd one(1);
  one(0) = 1.0;
  return concurrence_low_rank(psi, one, da, /*parallel=*/true);
}

double von_neumann_entropy(const DensityMatrix& rho) {
  const Eigen::VectorXd p = symmetric_eigenvalues(rho.matrix);
  double s = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i)
    if (p(i) > kEntropyFloor) s -= p(i) * std::log(p(i));
  return s;
}

Eigen::VectorXd schmidt_coefficients(const Eigen::VectorXd& psi, const std::vector<std::int64_t>& dims,
                                     const Bipartition& bipart) {
  if (std::abs(psi.norm() - 1.0) > kNormTol)
    throw config_error("schmidt_coefficients: state must be normalized");
  DensityMatrix probe;
  probe.dims = dims;
  std::int64_t da = 0, db = 0;
  split_dims(probe, bipart, da, db);
  if (da * db != psi.size()) throw config_error("schmidt_coefficients: dims do not match state");
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> m(
      psi.data(), da, db);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues();
}

CoherenceDecomposition coherence_decomposition(const DensityMatrix& rho) {
  if (rho.dims.size() != 2)
    throw config_error("coherence_decomposition: two-factor state required");
  const int da = static_cast<int>(rho.dims[0]);
  const int db = static_cast<int>(rho.dims[1]);
  const GeneratorSet ga = su_generators(da);
  const GeneratorSet gb = su_generators(db);
  const int na = static_cast<int>(ga.generators.size());
  const int nb = static_cast<int>(gb.generators.size());

  const DensityMatrix rho_a = partial_trace(rho, {1});
  const DensityMatrix rho_b = partial_trace(rho, {2});

  CoherenceDecomposition dec;
  dec.dim_a = da;
  dec.dim_b = db;
  dec.bloch_a.resize(na);
  dec.bloch_b.resize(nb);
  dec.k_tensor.resize(na, nb);
  // tr(rho G) is real for Hermitian G and symmetric real rho, so only Re(G)
  // contributes; the antisymmetric family has Re(G) = 0 and Bloch component 0
  for (int i = 0; i < na; ++i) dec.bloch_a(i) = (rho_a.matrix * ga.generators[i].real()).trace();
  for (int i = 0; i < na; ++i) {
    // X_i(b,b') = sum_{a,a'} G_i(a',a) rho(ab, a'b'), then K_ij = tr over B
    Eigen::MatrixXcd x = Eigen::MatrixXcd::Zero(db, db);
    for (int a = 0; a < da; ++a)
      for (int ap = 0; ap < da; ++ap) {
        const std::complex<double> gi = ga.generators[i](ap, a);
        if (gi == std::complex<double>(0, 0)) continue;
        x += gi * rho.matrix.block(a * db, ap * db, db, db);
      }
    for (int j = 0; j < nb; ++j) {
      std::complex<double> k(0, 0);
      for (int b = 0; b < db; ++b)
        for (int bp = 0; bp < db; ++bp) k += x(b, bp) * gb.generators[j](bp, b);
      dec.k_tensor(i, j) = k.real();
    }
  }
  for (int j = 0; j < nb; ++j)
    dec.bloch_b(j) = (rho_b.matrix * gb.generators[j].real()).trace();
  return dec;
}

ZhouCorrelations zhou_correlations(const CoherenceDecomposition& decomp) {
  const int na = static_cast<int>(decomp.bloch_a.size());
  if (decomp.k_tensor.rows() != na || decomp.k_tensor.cols() != decomp.bloch_b.size())
    throw config_error("zhou_correlations: inconsistent decomposition");
  const double b2 = decomp.bloch_b.squaredNorm();
  const Eigen::MatrixXd lam = decomp.k_tensor * decomp.k_tensor.transpose() -
                              b2 * decomp.bloch_a * decomp.bloch_a.transpose();
  Eigen::VectorXd ev = symmetric_eigenvalues(lam);
  std::sort(ev.data(), ev.data() + ev.size(),
            [](double a, double b) { return std::abs(a) > std::abs(b); });
  ZhouCorrelations z;
  z.criterion_eigenvalues = ev;
  const int da = decomp.dim_a;
  for (int i = 0; i < na; ++i) {
    const double v = 0.25 * std::abs(ev(i));
    if (i < da - 1)
      z.classical += v;
    else
      z.quantum += v;
  }
  z.total = z.classical + z.quantum;  // exact by construction
  return z;
}

}  // namespace bbq
