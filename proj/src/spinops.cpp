#include "bbq/spinops.hpp"

#include <cmath>

#include "bbq/errors.hpp"

namespace bbq {

namespace {
constexpr int kGeneratorDimGuard = 256;

void check_dim(int d) {
  if (d < 2) throw config_error("generator set needs local dimension >= 2");
  if (d > kGeneratorDimGuard)
    throw resource_limit_error("refusing to materialize generators for d > 256; use the streamed paths");
}
}  // namespace

SpinOperators spin1_operators() {
  using std::complex;
  const double r = 1.0 / std::sqrt(2.0);
  SpinOperators s;
  s.sx.setZero();
  s.sx(0, 1) = r; s.sx(1, 0) = r; s.sx(1, 2) = r; s.sx(2, 1) = r;
  s.sy.setZero();
  s.sy(0, 1) = complex<double>(0, -r); s.sy(1, 0) = complex<double>(0, r);
  s.sy(1, 2) = complex<double>(0, -r); s.sy(2, 1) = complex<double>(0, r);
  s.sz.setZero();
  s.sz(0, 0) = 1.0; s.sz(2, 2) = -1.0;
  return s;
}

GeneratorSet so_generators(int d) {
  check_dim(d);
  GeneratorSet set;
  set.dim = d;
  set.kind = GeneratorKind::SO;
  set.generators.reserve(static_cast<std::size_t>(d) * (d - 1) / 2);
  for (int j = 0; j < d; ++j) {
    for (int k = j + 1; k < d; ++k) {
      Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(d, d);
      g(j, k) = std::complex<double>(0, -1);
      g(k, j) = std::complex<double>(0, 1);
      set.generators.push_back(std::move(g));
    }
  }
  return set;
}

GeneratorSet su_generators(int d) {
  check_dim(d);
  GeneratorSet set;
  set.dim = d;
  set.kind = GeneratorKind::SU;
  set.generators.reserve(static_cast<std::size_t>(d) * d - 1);
  for (int j = 0; j < d; ++j) {
    for (int k = j + 1; k < d; ++k) {
      Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(d, d);
      g(j, k) = 1.0;
      g(k, j) = 1.0;
      set.generators.push_back(std::move(g));
    }
  }
  for (int j = 0; j < d; ++j) {
    for (int k = j + 1; k < d; ++k) {
      Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(d, d);
      g(j, k) = std::complex<double>(0, -1);
      g(k, j) = std::complex<double>(0, 1);
      set.generators.push_back(std::move(g));
    }
  }
  for (int l = 1; l < d; ++l) {
    Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(d, d);
    const double norm = std::sqrt(2.0 / (static_cast<double>(l) * (l + 1)));
    for (int m = 0; m < l; ++m) g(m, m) = norm;
    g(l, l) = -norm * l;
    set.generators.push_back(std::move(g));
  }
  return set;
}

}  // namespace bbq
