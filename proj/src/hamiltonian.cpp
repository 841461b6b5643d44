#include "bbq/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bbq/errors.hpp"
#include "bbq/spinops.hpp"

namespace bbq {

namespace {
constexpr int kAssemblyLengthGuard = 12;
constexpr double kStructuralZero = 1e-14;

Eigen::Matrix<double, 9, 9> heisenberg_pair() {
  const SpinOperators s = spin1_operators();
  Eigen::MatrixXcd ss = Eigen::MatrixXcd::Zero(9, 9);
  for (const auto* op : {&s.sx, &s.sy, &s.sz}) {
    Eigen::MatrixXcd k(9, 9);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) k.block(3 * i, 3 * j, 3, 3) = (*op)(i, j) * (*op);
    ss += k;
  }
  // products of the purely imaginary sy entries are real
  return ss.real();
}

struct RawEntry {
  std::int64_t row;
  std::int64_t col;
  double bl;
  double bq;
};

}  // namespace

SpinChainSpec::SpinChainSpec(int length, Boundary boundary, double theta)
    : length(length), boundary(boundary), theta(theta) {
  if (length < 2) throw config_error("chain length must be >= 2");
  const double two_pi = 2.0 * std::numbers::pi;
  double t = std::fmod(theta + std::numbers::pi, two_pi);
  if (t < 0) t += two_pi;
  this->theta = t - std::numbers::pi;
}

std::int64_t pow3(int n) {
  std::int64_t p = 1;
  for (int i = 0; i < n; ++i) p *= 3;
  return p;
}

Eigen::Matrix<double, 9, 9> bond_operator(double theta) {
  static const Eigen::Matrix<double, 9, 9> ss = heisenberg_pair();
  static const Eigen::Matrix<double, 9, 9> ss2 = ss * ss;
  return std::cos(theta) * ss + std::sin(theta) * ss2;
}

SparseSymmetricOperator SparseSymmetricOperator::from_coo(std::int64_t dim,
                                                          std::vector<CooEntry> entries) {
  std::sort(entries.begin(), entries.end(), [](const CooEntry& a, const CooEntry& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  auto row_ptr = std::make_shared<std::vector<std::int64_t>>(dim + 1, 0);
  auto cols = std::make_shared<std::vector<std::int32_t>>();
  SparseSymmetricOperator op;
  op.dim_ = dim;
  for (std::size_t i = 0; i < entries.size();) {
    std::size_t j = i;
    double v = 0.0;
    while (j < entries.size() && entries[j].row == entries[i].row && entries[j].col == entries[i].col)
      v += entries[j++].value;
    cols->push_back(static_cast<std::int32_t>(entries[i].col));
    op.vals_.push_back(v);
    ++(*row_ptr)[entries[i].row + 1];
    i = j;
  }
  for (std::int64_t r = 0; r < dim; ++r) (*row_ptr)[r + 1] += (*row_ptr)[r];
  op.row_ptr_ = std::move(row_ptr);
  op.cols_ = std::move(cols);
  return op;
}

void SparseSymmetricOperator::apply(const double* x, double* y) const {
  const auto& rp = *row_ptr_;
  const auto& cols = *cols_;
  const std::int64_t n = dim_;
#pragma omp parallel for schedule(static)
  for (std::int64_t r = 0; r < n; ++r) {
    double acc = 0.0;
    for (std::int64_t idx = rp[r]; idx < rp[r + 1]; ++idx) acc += vals_[idx] * x[cols[idx]];
    y[r] = acc;
  }
}

void SparseSymmetricOperator::apply_serial(const double* x, double* y) const {
  const auto& rp = *row_ptr_;
  const auto& cols = *cols_;
  for (std::int64_t r = 0; r < dim_; ++r) {
    double acc = 0.0;
    for (std::int64_t idx = rp[r]; idx < rp[r + 1]; ++idx) acc += vals_[idx] * x[cols[idx]];
    y[r] = acc;
  }
}

Eigen::VectorXd SparseSymmetricOperator::apply(const Eigen::VectorXd& v) const {
  if (v.size() != dim_) throw config_error("apply: vector dimension mismatch");
  Eigen::VectorXd y(dim_);
  apply(v.data(), y.data());
  return y;
}

Eigen::VectorXd SparseSymmetricOperator::apply_serial(const Eigen::VectorXd& v) const {
  if (v.size() != dim_) throw config_error("apply: vector dimension mismatch");
  Eigen::VectorXd y(dim_);
  apply_serial(v.data(), y.data());
  return y;
}

std::vector<CooEntry> SparseSymmetricOperator::coo() const {
  std::vector<CooEntry> out;
  out.reserve(vals_.size());
  for (std::int64_t r = 0; r < dim_; ++r)
    for (std::int64_t idx = (*row_ptr_)[r]; idx < (*row_ptr_)[r + 1]; ++idx)
      out.push_back({r, (*cols_)[idx], vals_[idx]});
  return out;
}

Eigen::MatrixXd SparseSymmetricOperator::dense() const {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim_, dim_);
  for (std::int64_t r = 0; r < dim_; ++r)
    for (std::int64_t idx = (*row_ptr_)[r]; idx < (*row_ptr_)[r + 1]; ++idx)
      m(r, (*cols_)[idx]) = vals_[idx];
  return m;
}

double SparseSymmetricOperator::trace() const {
  double t = 0.0;
  for (std::int64_t r = 0; r < dim_; ++r)
    for (std::int64_t idx = (*row_ptr_)[r]; idx < (*row_ptr_)[r + 1]; ++idx)
      if ((*cols_)[idx] == r) t += vals_[idx];
  return t;
}

SparseSymmetricOperator SparseSymmetricOperator::combine(double ca, const SparseSymmetricOperator& other,
                                                         double cb) const {
  if (row_ptr_ != other.row_ptr_ || cols_ != other.cols_)
    throw config_error("combine requires operators sharing one sparsity pattern");
  SparseSymmetricOperator out;
  out.dim_ = dim_;
  out.row_ptr_ = row_ptr_;
  out.cols_ = cols_;
  out.vals_.resize(vals_.size());
  for (std::size_t i = 0; i < vals_.size(); ++i) out.vals_[i] = ca * vals_[i] + cb * other.vals_[i];
  return out;
}

ChainTerms::ChainTerms(int length, Boundary boundary) : length_(length), boundary_(boundary) {
  if (length < 2) throw config_error("chain length must be >= 2");
  if (length > kAssemblyLengthGuard)
    throw resource_limit_error("sparse assembly guarded to L <= 12 (3^12 rows)");

  const Eigen::Matrix<double, 9, 9> bl9 = bond_operator(0.0);
  const Eigen::Matrix<double, 9, 9> bq9 = bond_operator(std::numbers::pi / 2.0);

  // structural union of the two term patterns, per 9x9 block row
  struct BlockEntry {
    int col9;
    double bl, bq;
  };
  std::vector<std::vector<BlockEntry>> block_rows(9);
  for (int r = 0; r < 9; ++r)
    for (int c = 0; c < 9; ++c)
      if (std::abs(bl9(r, c)) > kStructuralZero || std::abs(bq9(r, c)) > kStructuralZero)
        block_rows[r].push_back({c, bl9(r, c), bq9(r, c)});

  const std::int64_t dim = pow3(length);
  const int nbonds = boundary == Boundary::Periodic ? length : length - 1;
  std::vector<RawEntry> raw;
  raw.reserve(static_cast<std::size_t>(dim) * nbonds * 3);

  for (int b = 0; b < nbonds; ++b) {
    const int u = b + 1;
    const int v = (b + 1) % length + 1;  // wrap bond couples sites (L, 1)
    const std::int64_t su = pow3(length - u);
    const std::int64_t sv = pow3(length - v);
    for (std::int64_t i = 0; i < dim; ++i) {
      const int a = static_cast<int>((i / su) % 3);
      const int c = static_cast<int>((i / sv) % 3);
      const std::int64_t base = i - a * su - c * sv;
      for (const BlockEntry& e : block_rows[3 * a + c]) {
        const int ap = e.col9 / 3;
        const int cp = e.col9 % 3;
        raw.push_back({i, base + ap * su + cp * sv, e.bl, e.bq});
      }
    }
  }

  std::sort(raw.begin(), raw.end(), [](const RawEntry& a, const RawEntry& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });

  auto row_ptr = std::make_shared<std::vector<std::int64_t>>(dim + 1, 0);
  auto cols = std::make_shared<std::vector<std::int32_t>>();
  std::vector<double> bl_vals;
  std::vector<double> bq_vals;
  for (std::size_t i = 0; i < raw.size();) {
    std::size_t j = i;
    double vbl = 0.0, vbq = 0.0;
    while (j < raw.size() && raw[j].row == raw[i].row && raw[j].col == raw[i].col) {
      vbl += raw[j].bl;
      vbq += raw[j].bq;
      ++j;
    }
    cols->push_back(static_cast<std::int32_t>(raw[i].col));
    bl_vals.push_back(vbl);
    bq_vals.push_back(vbq);
    ++(*row_ptr)[raw[i].row + 1];
    i = j;
  }
  for (std::int64_t r = 0; r < dim; ++r) (*row_ptr)[r + 1] += (*row_ptr)[r];

  bilinear_.dim_ = dim;
  bilinear_.row_ptr_ = row_ptr;
  bilinear_.cols_ = cols;
  bilinear_.vals_ = std::move(bl_vals);
  biquadratic_.dim_ = dim;
  biquadratic_.row_ptr_ = row_ptr;
  biquadratic_.cols_ = cols;
  biquadratic_.vals_ = std::move(bq_vals);
}

SparseSymmetricOperator ChainTerms::hamiltonian(double theta) const {
  return bilinear_.combine(std::cos(theta), biquadratic_, std::sin(theta));
}

SparseSymmetricOperator build_hamiltonian(const SpinChainSpec& spec) {
  return ChainTerms(spec.length, spec.boundary).hamiltonian(spec.theta);
}

}  // namespace bbq
