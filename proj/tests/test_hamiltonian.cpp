#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>
#include <random>

#include "bbq/errors.hpp"
#include "bbq/hamiltonian.hpp"
#include "oracles.hpp"

using namespace bbq;
constexpr double pi = std::numbers::pi;

namespace {

// multiset comparison for eigenvalue lists
void check_multiplets(const Eigen::VectorXd& sorted, const std::vector<std::pair<double, int>>& ref,
                      double tol) {
  int at = 0;
  for (const auto& [value, count] : ref)
    for (int c = 0; c < count; ++c, ++at) CHECK(std::abs(sorted(at) - value) < tol);
  CHECK(at == sorted.size());
}

}  // namespace

TEST_CASE("bond operator spectra from the total-spin decomposition") {
  // oracle: S1.S2 = (J(J+1) - 4)/2 for J in {0,1,2} with multiplicities {1,3,5}
  const SpinOperators s = spin1_operators();
  Eigen::MatrixXcd stot2 = Eigen::MatrixXcd::Zero(9, 9);
  for (const auto* op : {&s.sx, &s.sy, &s.sz}) {
    const Eigen::MatrixXcd t =
        oracle::kron(*op, Eigen::MatrixXcd::Identity(3, 3)) +
        oracle::kron(Eigen::MatrixXcd::Identity(3, 3), *op);
    stot2 += t * t;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(stot2);
  // J(J+1) in {0, 2, 6} -> S1.S2 in {-2, -1, +1}
  check_multiplets(es.eigenvalues(), {{0, 1}, {2, 3}, {6, 5}}, 1e-12);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> b0(bond_operator(0.0));
  check_multiplets(b0.eigenvalues(), {{-2, 1}, {-1, 3}, {1, 5}}, 1e-12);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> b1(bond_operator(pi / 2));
  check_multiplets(b1.eigenvalues(), {{1, 8}, {4, 1}}, 1e-12);
}

TEST_CASE("bond operator is real and matches the complex kron construction") {
  const SpinOperators s = spin1_operators();
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> uth(-pi, pi);
  for (int rep = 0; rep < 5; ++rep) {
    const double theta = uth(rng);
    Eigen::MatrixXcd ss = Eigen::MatrixXcd::Zero(9, 9);
    for (const auto* op : {&s.sx, &s.sy, &s.sz}) ss += oracle::kron(*op, *op);
    const Eigen::MatrixXcd ref = std::cos(theta) * ss + std::sin(theta) * ss * ss;
    CHECK(ref.imag().cwiseAbs().maxCoeff() < 1e-14);
    CHECK((bond_operator(theta) - ref.real()).cwiseAbs().maxCoeff() < 1e-13);
    CHECK((bond_operator(theta) - bond_operator(theta).transpose()).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("sparse assembly equals the independent dense construction, L <= 5") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> uth(-pi, pi);
  for (int length = 2; length <= 5; ++length) {
    for (Boundary b : {Boundary::Periodic, Boundary::Open}) {
      const double theta = uth(rng);
      CAPTURE(length);
      CAPTURE(theta);
      const auto h = build_hamiltonian(SpinChainSpec(length, b, theta));
      const Eigen::MatrixXd ref = oracle::dense_chain(length, b, theta);
      CHECK((h.dense() - ref).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("trace identity tr(H) = 3^(L-2) * N' * tr(bond)") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> uth(-pi, pi);
  for (int length : {2, 4, 7}) {
    for (Boundary b : {Boundary::Periodic, Boundary::Open}) {
      const double theta = uth(rng);
      const auto h = build_hamiltonian(SpinChainSpec(length, b, theta));
      const int nbonds = b == Boundary::Periodic ? length : length - 1;
      const double expected =
          static_cast<double>(pow3(length - 2)) * nbonds * bond_operator(theta).trace();
      CHECK(std::abs(h.trace() - expected) < 1e-9 * (1.0 + std::abs(expected)));
    }
  }
}

TEST_CASE("periodic chain commutes with the cyclic site shift") {
  for (int length : {3, 4}) {
    const auto h = build_hamiltonian(SpinChainSpec(length, Boundary::Periodic, 0.37));
    const std::int64_t dim = pow3(length);
    // permutation: shift digits left by one site
    Eigen::MatrixXd hd = h.dense();
    Eigen::MatrixXd shifted(dim, dim);
    auto shift_index = [&](std::int64_t i) {
      const std::int64_t msd = i / pow3(length - 1);
      return (i % pow3(length - 1)) * 3 + msd;
    };
    for (std::int64_t r = 0; r < dim; ++r)
      for (std::int64_t c = 0; c < dim; ++c) shifted(shift_index(r), shift_index(c)) = hd(r, c);
    CHECK((shifted - hd).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("H(theta) is the (cos, sin) combination of fixed bilinear/biquadratic parts") {
  const ChainTerms terms(4, Boundary::Periodic);
  const Eigen::MatrixXd bl = terms.bilinear().dense();
  const Eigen::MatrixXd bq = terms.biquadratic().dense();
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> uth(-pi, pi);
  for (int rep = 0; rep < 5; ++rep) {
    const double theta = uth(rng);
    const Eigen::MatrixXd h = terms.hamiltonian(theta).dense();
    CHECK((h - std::cos(theta) * bl - std::sin(theta) * bq).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("periodic L=2 keeps the doubled bond") {
  const auto per = build_hamiltonian(SpinChainSpec(2, Boundary::Periodic, 0.3));
  const auto open = build_hamiltonian(SpinChainSpec(2, Boundary::Open, 0.3));
  CHECK((per.dense() - 2.0 * open.dense()).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("apply") {
  const auto h = build_hamiltonian(SpinChainSpec(4, Boundary::Periodic, -0.7));
  const std::int64_t n = h.dim();

  SUBCASE("zero maps to zero") {
    const Eigen::VectorXd y = h.apply(Eigen::VectorXd::Zero(n));
    CHECK(y.cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("matches the dense product and the serial kernel bitwise") {
    std::mt19937_64 rng(23);
    const Eigen::VectorXd v = oracle::random_unit(n, rng);
    const Eigen::VectorXd y = h.apply(v);
    const Eigen::VectorXd ys = h.apply_serial(v);
    CHECK((y - ys).cwiseAbs().maxCoeff() == 0.0);  // same order of operations per row
    CHECK((y - h.dense() * v).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("quadratic form is symmetric") {
    std::mt19937_64 rng(29);
    const Eigen::VectorXd v = oracle::random_unit(n, rng);
    const Eigen::VectorXd w = oracle::random_unit(n, rng);
    CHECK(std::abs(v.dot(h.apply(w)) - w.dot(h.apply(v))) < 1e-12);
  }
  SUBCASE("eigenvector of the L=2 open bond") {
    const auto h2 = build_hamiltonian(SpinChainSpec(2, Boundary::Open, 0.0));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h2.dense());
    const Eigen::VectorXd v = es.eigenvectors().col(0);
    CHECK((h2.apply(v) + 2.0 * v).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("dimension mismatch") {
    CHECK_THROWS_AS(h.apply(Eigen::VectorXd::Zero(n + 1)), config_error);
  }
}

TEST_CASE("spec validation and guards") {
  CHECK_THROWS_AS(SpinChainSpec(1, Boundary::Open, 0.0), config_error);
  CHECK_THROWS_AS(ChainTerms(13, Boundary::Open), resource_limit_error);
  CHECK_THROWS_AS(ChainTerms(1, Boundary::Open), config_error);

  // theta normalized into [-pi, pi)
  const SpinChainSpec a(2, Boundary::Open, 3.0 * pi);
  CHECK(a.theta == doctest::Approx(-pi).epsilon(1e-12));
  const SpinChainSpec b(2, Boundary::Open, -1.5 * pi);
  CHECK(b.theta == doctest::Approx(0.5 * pi).epsilon(1e-12));
  const SpinChainSpec c(2, Boundary::Open, pi);
  CHECK(c.theta == doctest::Approx(-pi).epsilon(1e-12));
}

TEST_CASE("coo round trip and symmetry of the assembled operator") {
  const auto h = build_hamiltonian(SpinChainSpec(3, Boundary::Periodic, 1.1));
  const auto entries = h.coo();
  CHECK(static_cast<std::int64_t>(entries.size()) == h.nnz());
  auto rebuilt = SparseSymmetricOperator::from_coo(h.dim(), entries);
  CHECK((rebuilt.dense() - h.dense()).cwiseAbs().maxCoeff() == 0.0);
  // (r, c, v) implies (c, r, v)
  const Eigen::MatrixXd d = h.dense();
  CHECK((d - d.transpose()).cwiseAbs().maxCoeff() == 0.0);
}
