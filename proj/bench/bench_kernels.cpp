// Serial vs OpenMP timings for the hot kernels: the sparse matrix-vector
// apply, the streamed concurrence sum, and a small end-to-end sweep.
#include <omp.h>

#include <chrono>
#include <cstdio>
#include <random>

#include "bbq/hamiltonian.hpp"
#include "bbq/measures.hpp"
#include "bbq/sweep.hpp"

using clk = std::chrono::steady_clock;

static double ms_since(clk::time_point t0) {
  return std::chrono::duration<double, std::milli>(clk::now() - t0).count();
}

int main() {
  std::printf("threads available: %d\n\n", omp_get_max_threads());

  {
    const int L = 9;
    bbq::ChainTerms terms(L, bbq::Boundary::Periodic);
    const auto h = terms.hamiltonian(0.3);
    Eigen::VectorXd x = Eigen::VectorXd::Random(h.dim());
    Eigen::VectorXd y(h.dim());
    const int reps = 50;

    auto t0 = clk::now();
    for (int r = 0; r < reps; ++r) h.apply_serial(x.data(), y.data());
    const double serial = ms_since(t0);
    t0 = clk::now();
    for (int r = 0; r < reps; ++r) h.apply(x.data(), y.data());
    const double parallel = ms_since(t0);
    std::printf("H*v apply, L=%d (dim %lld, nnz %lld), %d reps\n", L,
                static_cast<long long>(h.dim()), static_cast<long long>(h.nnz()), reps);
    std::printf("  serial   %8.2f ms\n  openmp   %8.2f ms   (x%.2f)\n\n", serial, parallel,
                serial / parallel);
  }

  {
    const int L = 8;
    const std::int64_t dim = bbq::pow3(L);
    std::mt19937_64 rng(7);
    std::normal_distribution<double> gauss;
    Eigen::MatrixXd psi(dim, 1);
    for (std::int64_t i = 0; i < dim; ++i) psi(i, 0) = gauss(rng);
    psi.col(0).normalize();
    const Eigen::VectorXd w = Eigen::VectorXd::Ones(1);

    auto t0 = clk::now();
    const auto a = bbq::concurrence_low_rank(psi, w, 3, /*parallel=*/false);
    const double serial = ms_since(t0);
    t0 = clk::now();
    const auto b = bbq::concurrence_low_rank(psi, w, 3, /*parallel=*/true);
    const double parallel = ms_since(t0);
    std::printf("concurrence stream, L=%d (%.2e generator pairs)\n", L,
                1.5 * static_cast<double>(dim / 3) * (dim / 3 - 1));
    std::printf("  serial   %8.2f ms  |C|^2 = %.12f\n", serial, a.norm_squared);
    std::printf("  openmp   %8.2f ms  |C|^2 = %.12f   (x%.2f)\n", parallel, b.norm_squared,
                serial / parallel);
    std::printf("  |delta|  %.3g\n\n", std::abs(a.norm_squared - b.norm_squared));
  }

  {
    bbq::SweepConfig cfg;
    cfg.length = 6;
    cfg.grid = {-1.0, 1.0, 41};
    cfg.measures = {bbq::MeasureKind::EntropyTotal, bbq::MeasureKind::Zhou};
    cfg.jobs = 1;
    auto t0 = clk::now();
    bbq::run_sweep(cfg);
    const double serial = ms_since(t0);
    cfg.jobs = omp_get_max_threads();
    t0 = clk::now();
    bbq::run_sweep(cfg);
    const double parallel = ms_since(t0);
    std::printf("sweep L=6, 41 points, entropy+zhou\n");
    std::printf("  jobs=1   %8.0f ms\n  jobs=%d   %8.0f ms   (x%.2f)\n", serial,
                omp_get_max_threads(), parallel, serial / parallel);
  }
  return 0;
}
