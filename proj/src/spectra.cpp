#include "bbq/spectra.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "bbq/errors.hpp"

namespace bbq {

Spectrum dense_eigh(Eigen::MatrixXd a, bool vectors) {
  if (a.rows() != a.cols()) throw config_error("dense_eigh: square matrix required");
  const lapack_int n = static_cast<lapack_int>(a.rows());
  Eigen::VectorXd w(n);
  const lapack_int info =
      LAPACKE_dsyevd(LAPACK_COL_MAJOR, vectors ? 'V' : 'N', 'L', n, a.data(), n, w.data());
  if (info != 0) throw convergence_error("dsyevd failed to converge", static_cast<double>(info));
  Spectrum s;
  s.eigenvalues = std::move(w);
  if (vectors) s.eigenvectors = std::move(a);
  s.complete = true;
  return s;
}

Spectrum dense_eigh(const SparseSymmetricOperator& h, const DenseEighOptions& opts) {
  if (!opts.force && h.dim() > opts.dim_guard)
    throw resource_limit_error("dense_eigh guarded to dimension <= 6561 (pass force to override)");
  return dense_eigh(h.dense(), opts.vectors);
}

namespace {

// eigen-decomposition of the Lanczos tridiagonal
void tridiag_eig(const Eigen::VectorXd& alpha, const Eigen::VectorXd& beta, int m,
                 Eigen::VectorXd& vals, Eigen::MatrixXd& vecs) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(alpha.head(m), beta.head(std::max(m - 1, 0)),
                            Eigen::ComputeEigenvectors);
  vals = es.eigenvalues();
  vecs = es.eigenvectors();
}

}  // namespace

Spectrum lanczos_extremal(const SparseSymmetricOperator& h, int k, const LanczosOptions& opts) {
  const std::int64_t n = h.dim();
  if (k < 1) throw config_error("lanczos_extremal: k must be >= 1");
  if (k > n) throw config_error("lanczos_extremal: k exceeds operator dimension");

  std::vector<double> locked_vals;
  Eigen::MatrixXd locked(n, std::min<std::int64_t>(n, k + 33));
  int n_locked = 0;

  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const int max_iter =
      opts.max_iter > 0 ? opts.max_iter : static_cast<int>(std::min<std::int64_t>(n, 600));
  const int max_restarts = opts.max_restarts > 0 ? opts.max_restarts : k + 32;
  const int check_stride = 8;
  double best_residual = std::numeric_limits<double>::infinity();

  // One deflated Krylov run; locks up to `budget` ascending converged pairs.
  // Returns the number locked (0 only on convergence failure at the cap).
  auto run_restart = [&](int budget) -> int {
    Eigen::VectorXd v(n);
    double vnorm = 0.0;
    for (int attempt = 0; attempt < 64; ++attempt) {
      for (std::int64_t i = 0; i < n; ++i) v(i) = gauss(rng);
      if (n_locked > 0) {
        auto lk = locked.leftCols(n_locked);
        v -= lk * (lk.transpose() * v);
        v -= lk * (lk.transpose() * v);
      }
      vnorm = v.norm();
      if (vnorm > 1e-8 * std::sqrt(static_cast<double>(n))) break;
    }
    if (vnorm == 0.0) throw convergence_error("lanczos: cannot find a start vector", best_residual);
    v /= vnorm;

    const int m_cap = static_cast<int>(std::min<std::int64_t>(max_iter, n - n_locked));
    Eigen::MatrixXd basis(n, m_cap);
    Eigen::VectorXd alpha(m_cap), beta(m_cap);
    basis.col(0) = v;
    double tnorm = 0.0;
    int locked_this_run = 0;
    bool exhausted = false;

    for (int j = 0; j < m_cap; ++j) {
      Eigen::VectorXd w = h.apply(basis.col(j));
      alpha(j) = basis.col(j).dot(w);
      w -= alpha(j) * basis.col(j);
      if (j > 0) w -= beta(j - 1) * basis.col(j - 1);
      // full reorthogonalization (two classical Gram-Schmidt passes) against
      // the current basis and the locked pairs
      for (int pass = 0; pass < 2; ++pass) {
        auto vb = basis.leftCols(j + 1);
        w -= vb * (vb.transpose() * w);
        if (n_locked > 0) {
          auto lk = locked.leftCols(n_locked);
          w -= lk * (lk.transpose() * w);
        }
      }
      beta(j) = w.norm();
      const int m = j + 1;
      tnorm = std::max(tnorm, std::abs(alpha(j)) + beta(j) + (j > 0 ? beta(j - 1) : 0.0));
      exhausted = beta(j) <= 1e-13 * std::max(1.0, tnorm);
      const bool at_cap = (m == m_cap);

      if (exhausted || at_cap || m % check_stride == 0) {
        Eigen::VectorXd tvals;
        Eigen::MatrixXd tvecs;
        tridiag_eig(alpha, beta, m, tvals, tvecs);
        int prefix = 0;  // ascending Ritz pairs passing the residual estimate
        while (prefix < m) {
          const double est = exhausted ? 0.0 : beta(j) * std::abs(tvecs(m - 1, prefix));
          const double accept = opts.tol * (1.0 + std::abs(tvals(prefix)));
          if (est > accept) {
            best_residual = std::min(best_residual, est);
            break;
          }
          ++prefix;
        }
        if (prefix >= std::min(budget, m) || exhausted || (at_cap && prefix > 0)) {
          for (int i = 0; i < prefix && locked_this_run < budget; ++i) {
            if (n_locked == locked.cols()) break;
            Eigen::VectorXd x = basis.leftCols(m) * tvecs.col(i);
            x.normalize();
            const double lambda = tvals(i);
            const double resid = (h.apply(x) - lambda * x).norm();
            best_residual = std::min(best_residual, resid);
            if (resid <= opts.tol * (1.0 + std::abs(lambda))) {
              locked.col(n_locked) = x;
              locked_vals.push_back(lambda);
              ++n_locked;
              ++locked_this_run;
            } else {
              break;  // estimate was optimistic; restart
            }
          }
          if (locked_this_run > 0 || exhausted) return locked_this_run;
          if (at_cap)
            throw convergence_error("lanczos: iteration cap reached before convergence",
                                    best_residual);
        } else if (at_cap) {
          throw convergence_error("lanczos: iteration cap reached before convergence",
                                  best_residual);
        }
      }
      if (exhausted) break;
      basis.col(j + 1) = w / beta(j);
    }
    return locked_this_run;
  };

  // Restart until k pairs are locked, then verify against missed degenerate
  // copies: one Krylov run from a single vector sees each eigenvalue once, so
  // the deflated operator's lowest eigenvalue must not undercut the current
  // k-th value. Insert undercutting copies and re-verify.
  for (int restart = 0; restart < max_restarts; ++restart) {
    if (n_locked >= k) {
      if (n_locked == n) break;
      std::vector<double> sorted = locked_vals;
      std::nth_element(sorted.begin(), sorted.begin() + (k - 1), sorted.end());
      const double kth = sorted[k - 1];
      const int before = n_locked;
      run_restart(1);
      if (n_locked == before) break;  // nothing lockable left
      const double newest = locked_vals.back();
      if (newest >= kth - 10.0 * opts.tol * (1.0 + std::abs(kth))) break;  // verified
    } else if (run_restart(k - n_locked) == 0 && n_locked < k) {
      throw convergence_error("lanczos: Krylov space exhausted before locking k pairs",
                              best_residual);
    }
  }

  if (n_locked < k)
    throw convergence_error("lanczos: restart cap reached before locking k pairs", best_residual);

  // ascending merge of the locked pairs
  std::vector<int> order(n_locked);
  for (int i = 0; i < n_locked; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return locked_vals[a] < locked_vals[b]; });

  Spectrum s;
  s.eigenvalues.resize(k);
  s.eigenvectors.resize(n, k);
  for (int i = 0; i < k; ++i) {
    s.eigenvalues(i) = locked_vals[order[i]];
    s.eigenvectors.col(i) = locked.col(order[i]);
  }
  s.complete = (k == n);
  return s;
}

GroundSpace ground_space(const Spectrum& spectrum, double degeneracy_tol) {
  if (spectrum.eigenvalues.size() == 0) throw config_error("ground_space: empty spectrum");
  if (!spectrum.has_vectors()) throw config_error("ground_space: spectrum carries no eigenvectors");
  const double e0 = spectrum.eigenvalues(0);
  const double cut = degeneracy_tol * (1.0 + std::abs(e0));
  int g = 1;
  while (g < spectrum.eigenvalues.size() && spectrum.eigenvalues(g) - e0 <= cut) ++g;
  GroundSpace gs;
  gs.energy = e0;
  gs.degeneracy = g;
  gs.vectors = spectrum.eigenvectors.leftCols(g);
  return gs;
}

GroundSpace solve_ground_space(const SparseSymmetricOperator& h, int length,
                               const LanczosOptions& opts, double degeneracy_tol) {
  const std::int64_t n = h.dim();
  const int kmax = static_cast<int>(std::min<std::int64_t>(2 * length + 3, n));
  int k = static_cast<int>(std::min<std::int64_t>(6, n));
  for (;;) {
    Spectrum s = lanczos_extremal(h, k, opts);
    const double e0 = s.eigenvalues(0);
    const double cut = degeneracy_tol * (1.0 + std::abs(e0));
    bool gap = false;
    for (int i = 1; i < k; ++i)
      if (s.eigenvalues(i) - e0 > cut) {
        gap = true;
        break;
      }
    if (gap || k >= kmax) return ground_space(s, degeneracy_tol);
    k = std::min(kmax, k + 5);
  }
}

}  // namespace bbq
