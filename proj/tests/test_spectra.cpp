#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>
#include <random>

#include "bbq/errors.hpp"
#include "bbq/spectra.hpp"
#include "oracles.hpp"

using namespace bbq;
constexpr double pi = std::numbers::pi;

TEST_CASE("dense_eigh on the L=2 open chain at theta=0") {
  const auto h = build_hamiltonian(SpinChainSpec(2, Boundary::Open, 0.0));
  const Spectrum s = dense_eigh(h);
  REQUIRE(s.complete);
  REQUIRE(s.eigenvalues.size() == 9);
  // total-spin multiplets: {-2 x1, -1 x3, +1 x5}
  CHECK(s.eigenvalues(0) == doctest::Approx(-2.0).epsilon(1e-12));
  for (int i = 1; i <= 3; ++i) CHECK(s.eigenvalues(i) == doctest::Approx(-1.0).epsilon(1e-12));
  for (int i = 4; i <= 8; ++i) CHECK(s.eigenvalues(i) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("dense_eigh basics") {
  SUBCASE("diagonal operator sorts its entries") {
    std::vector<CooEntry> entries{{0, 0, 3.0}, {1, 1, -1.0}, {2, 2, 2.0}, {3, 3, 0.5}};
    const auto d = SparseSymmetricOperator::from_coo(4, entries);
    const Spectrum s = dense_eigh(d);
    CHECK(s.eigenvalues(0) == doctest::Approx(-1.0));
    CHECK(s.eigenvalues(1) == doctest::Approx(0.5));
    CHECK(s.eigenvalues(2) == doctest::Approx(2.0));
    CHECK(s.eigenvalues(3) == doctest::Approx(3.0));
  }
  SUBCASE("trace identity, residual and orthonormality") {
    const auto h = build_hamiltonian(SpinChainSpec(4, Boundary::Periodic, 0.9));
    const Spectrum s = dense_eigh(h);
    CHECK(std::abs(s.eigenvalues.sum() - h.trace()) < 1e-8 * (1.0 + std::abs(h.trace())));
    const Eigen::MatrixXd hd = h.dense();
    const double resid =
        (hd * s.eigenvectors - s.eigenvectors * s.eigenvalues.asDiagonal()).cwiseAbs().maxCoeff();
    CHECK(resid <= 1e-8 * hd.cwiseAbs().maxCoeff());
    const Eigen::MatrixXd gram = s.eigenvectors.transpose() * s.eigenvectors;
    CHECK((gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff() <=
          1e-10);
  }
  SUBCASE("guard") {
    ChainTerms terms(9, Boundary::Open);
    CHECK_THROWS_AS(dense_eigh(terms.hamiltonian(0.0)), resource_limit_error);
  }
}

TEST_CASE("lanczos_extremal") {
  SUBCASE("L=2 ground state") {
    const auto h = build_hamiltonian(SpinChainSpec(2, Boundary::Open, 0.0));
    const Spectrum s = lanczos_extremal(h, 1);
    CHECK(s.eigenvalues(0) == doctest::Approx(-2.0).epsilon(1e-9));
  }
  SUBCASE("L=6 periodic: 3 lowest match dense") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> uth(-pi, pi);
    const double theta = uth(rng);
    const auto h = build_hamiltonian(SpinChainSpec(6, Boundary::Periodic, theta));
    const Spectrum lz = lanczos_extremal(h, 3);
    const Spectrum dn = dense_eigh(h);
    for (int i = 0; i < 3; ++i) CHECK(std::abs(lz.eigenvalues(i) - dn.eigenvalues(i)) < 1e-8);
  }
  SUBCASE("k = dim on a tiny system agrees with dense everywhere") {
    const auto h = build_hamiltonian(SpinChainSpec(2, Boundary::Periodic, 0.4));
    const Spectrum lz = lanczos_extremal(h, 9);
    const Spectrum dn = dense_eigh(h);
    REQUIRE(lz.eigenvalues.size() == 9);
    CHECK(lz.complete);
    for (int i = 0; i < 9; ++i) CHECK(std::abs(lz.eigenvalues(i) - dn.eigenvalues(i)) < 1e-8);
  }
  SUBCASE("lanczos vs dense: L <= 5, both boundaries, 8 random thetas") {
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> uth(-pi, pi);
    for (int length = 2; length <= 5; ++length)
      for (Boundary b : {Boundary::Periodic, Boundary::Open})
        for (int rep = 0; rep < 8; ++rep) {
          const double theta = uth(rng);
          CAPTURE(length);
          CAPTURE(theta);
          const auto h = build_hamiltonian(SpinChainSpec(length, b, theta));
          const int k = static_cast<int>(std::min<std::int64_t>(4, h.dim()));
          const Spectrum lz = lanczos_extremal(h, k);
          const Spectrum dn = dense_eigh(h);
          for (int i = 0; i < k; ++i) CHECK(std::abs(lz.eigenvalues(i) - dn.eigenvalues(i)) < 1e-8);
        }
  }
  SUBCASE("deterministic for a fixed seed") {
    const auto h = build_hamiltonian(SpinChainSpec(5, Boundary::Periodic, 1.3));
    const Spectrum a = lanczos_extremal(h, 4);
    const Spectrum b = lanczos_extremal(h, 4);
    CHECK((a.eigenvalues - b.eigenvalues).cwiseAbs().maxCoeff() == 0.0);
    CHECK((a.eigenvectors - b.eigenvectors).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("iteration cap raises a convergence error carrying the best residual") {
    const auto h = build_hamiltonian(SpinChainSpec(5, Boundary::Periodic, 0.77));
    LanczosOptions opts;
    opts.max_iter = 3;
    opts.tol = 1e-13;
    CHECK_THROWS_AS(lanczos_extremal(h, 2, opts), convergence_error);
    try {
      lanczos_extremal(h, 2, opts);
    } catch (const convergence_error& e) {
      CHECK(e.best_residual > 0.0);
      CHECK(e.best_residual < 1e3);
    }
  }
  SUBCASE("argument checks") {
    const auto h = build_hamiltonian(SpinChainSpec(2, Boundary::Open, 0.0));
    CHECK_THROWS_AS(lanczos_extremal(h, 0), config_error);
    CHECK_THROWS_AS(lanczos_extremal(h, 10), config_error);
  }
}

TEST_CASE("ground_space") {
  SUBCASE("nondegenerate singlet at L=2") {
    const auto h = build_hamiltonian(SpinChainSpec(2, Boundary::Open, 0.0));
    const GroundSpace gs = ground_space(dense_eigh(h));
    CHECK(gs.degeneracy == 1);
    CHECK(gs.energy == doctest::Approx(-2.0).epsilon(1e-12));
  }
  SUBCASE("ferromagnetic multiplet at L=4 has degeneracy 2L+1") {
    const auto h = build_hamiltonian(SpinChainSpec(4, Boundary::Periodic, 3.0 * pi / 4.0));
    const GroundSpace gs = ground_space(dense_eigh(h));
    CHECK(gs.degeneracy == 9);
    // residual bound for every basis vector of the manifold
    for (int c = 0; c < gs.degeneracy; ++c) {
      const Eigen::VectorXd v = gs.vectors.col(c);
      CHECK((h.apply(v) - gs.energy * v).norm() <= 1e-9 * (1.0 + std::abs(gs.energy)));
    }
  }
  SUBCASE("projector property and commutation with H") {
    const auto h = build_hamiltonian(SpinChainSpec(4, Boundary::Periodic, 3.0 * pi / 4.0));
    const GroundSpace gs = ground_space(dense_eigh(h));
    const Eigen::MatrixXd p = gs.vectors * gs.vectors.transpose();
    CHECK((p * p - p).cwiseAbs().maxCoeff() < 1e-8);
    std::mt19937_64 rng(47);
    for (int rep = 0; rep < 4; ++rep) {
      const Eigen::VectorXd v = oracle::random_unit(h.dim(), rng);
      CHECK((h.apply(p * v) - p * h.apply(v)).norm() < 1e-8);
    }
  }
  SUBCASE("missing eigenvectors is a contract error") {
    const auto h = build_hamiltonian(SpinChainSpec(2, Boundary::Open, 0.0));
    DenseEighOptions opts;
    opts.vectors = false;
    CHECK_THROWS_AS(ground_space(dense_eigh(h, opts)), config_error);
  }
}

TEST_CASE("solve_ground_space resolves the ferromagnetic multiplet by expansion") {
  const auto h = build_hamiltonian(SpinChainSpec(4, Boundary::Periodic, 3.0 * pi / 4.0));
  const GroundSpace gs = solve_ground_space(h, 4);
  CHECK(gs.degeneracy == 9);
  const Eigen::MatrixXd gram = gs.vectors.transpose() * gs.vectors;
  CHECK((gram - Eigen::MatrixXd::Identity(9, 9)).cwiseAbs().maxCoeff() < 1e-9);
  // agrees with the dense ground space projector
  const GroundSpace dn = ground_space(dense_eigh(h));
  const Eigen::MatrixXd p1 = gs.vectors * gs.vectors.transpose();
  const Eigen::MatrixXd p2 = dn.vectors * dn.vectors.transpose();
  CHECK((p1 - p2).cwiseAbs().maxCoeff() < 1e-7);
}
