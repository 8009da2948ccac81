#include "cfsearch/cf_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cfsearch/errors.hpp"

namespace cfsearch {

namespace {

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

void require_power(double power) {
  if (!(power > 0.0) || !std::isfinite(power)) {
    throw InvalidInput("transmit power must be positive and finite");
  }
}

ComplexRowVector as_row(const CoefficientVector& a) {
  ComplexRowVector row(static_cast<Eigen::Index>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) row(static_cast<Eigen::Index>(i)) = a.value(i);
  return row;
}

ComplexRowVector as_row(std::span<const Complex> h) {
  ComplexRowVector row(static_cast<Eigen::Index>(h.size()));
  for (std::size_t i = 0; i < h.size(); ++i) row(static_cast<Eigen::Index>(i)) = h[i];
  return row;
}

void require_nonzero(const CoefficientVector& a) {
  if (a.size() == 0 || a.is_zero()) throw InvalidInput("coefficient vector must be nonzero");
}

}  // namespace

ChannelVector::ChannelVector(std::vector<Complex> gains, double power)
    : gains_(std::move(gains)), power_(power) {
  if (gains_.empty()) throw InvalidInput("channel must have at least one user");
  require_power(power_);
  if (!std::all_of(gains_.begin(), gains_.end(), finite)) {
    throw InvalidInput("channel gains must be finite");
  }
}

double ChannelVector::norm_sq() const {
  double sum = 0.0;
  for (const auto& g : gains_) sum += std::norm(g);
  return sum;
}

ChannelMatrix::ChannelMatrix(ComplexMatrix gains, double power)
    : gains_(std::move(gains)), power_(power) {
  if (gains_.rows() < 1 || gains_.cols() < 1) throw InvalidInput("channel matrix is empty");
  if (gains_.rows() > gains_.cols()) {
    throw InvalidInput("channel matrix needs k <= L (antennas <= users)");
  }
  require_power(power_);
  if (!gains_.allFinite()) throw InvalidInput("channel gains must be finite");
}

ChannelMatrix::ChannelMatrix(const ChannelVector& row)
    : ChannelMatrix(as_row(row.gains()), row.power()) {}

ChannelVector ChannelMatrix::row_channel() const {
  if (antennas() != 1) throw InvalidInput("row_channel needs a single-antenna channel");
  std::vector<Complex> h(users());
  for (std::size_t l = 0; l < users(); ++l) h[l] = gains_(0, static_cast<Eigen::Index>(l));
  return ChannelVector(std::move(h), power_);
}

CostMatrix::CostMatrix(ComplexMatrix m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols() || m_.rows() == 0) throw InvalidInput("cost matrix must be square");
  if (!m_.allFinite()) throw NumericError("cost matrix has non-finite entries");
  const double scale = std::max(1.0, m_.cwiseAbs().maxCoeff());
  const double asym = (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * scale) {
    throw NumericError("cost matrix is not Hermitian (asymmetry " + std::to_string(asym) + ")");
  }
  m_ = (0.5 * (m_ + m_.adjoint())).eval();
  Eigen::LLT<ComplexMatrix> llt(m_);
  if (llt.info() != Eigen::Success) throw NumericError("cost matrix is not positive definite");
  chol_ = llt.matrixL();
  for (Eigen::Index i = 0; i < chol_.rows(); ++i) {
    if (!(chol_(i, i).real() > 0.0)) throw NumericError("cost matrix is not positive definite");
  }
}

double CostMatrix::min_diagonal() const { return m_.diagonal().real().minCoeff(); }

double CostMatrix::quadratic_form(std::span<const Complex> a) const {
  const auto n = static_cast<Eigen::Index>(a.size());
  double diag = 0.0;
  Complex off{0.0, 0.0};
  for (Eigen::Index i = 0; i < n; ++i) {
    const Complex ai = a[static_cast<std::size_t>(i)];
    if (ai == Complex{}) continue;
    diag += m_(i, i).real() * std::norm(ai);
    Complex row{0.0, 0.0};
    for (Eigen::Index j = i + 1; j < n; ++j) {
      row += m_(i, j) * std::conj(a[static_cast<std::size_t>(j)]);
    }
    off += ai * row;
  }
  return diag + 2.0 * off.real();
}

double log2_plus(double x) { return x > 1.0 ? std::log2(x) : 0.0; }

CostMatrix cost_matrix(const ChannelVector& ch) {
  const auto h = as_row(ch.gains());
  const auto n = h.size();
  const double p = ch.power();
  ComplexMatrix m = (1.0 + p * ch.norm_sq()) * ComplexMatrix::Identity(n, n);
  m -= p * (h.adjoint() * h);
  return CostMatrix(std::move(m));
}

double cost(const CoefficientVector& a, const CostMatrix& m) {
  require_nonzero(a);
  if (a.size() != m.size()) throw InvalidInput("coefficient vector and cost matrix differ in size");
  const auto row = as_row(a);
  const Complex f = (row * m.matrix() * row.adjoint())(0, 0);
  if (std::abs(f.imag()) > 1e-9 * std::max(1.0, std::abs(f.real()))) {
    throw NumericError("quadratic form has a non-negligible imaginary part");
  }
  return f.real();
}

double rate(const ChannelVector& ch, const CoefficientVector& a) {
  require_nonzero(a);
  if (a.size() != ch.size()) throw InvalidInput("coefficient vector and channel differ in size");
  Complex ah{0.0, 0.0};
  for (std::size_t l = 0; l < a.size(); ++l) ah += a.value(l) * std::conj(ch.gains()[l]);
  const double p = ch.power();
  const double f =
      static_cast<double>(a.norm_sq()) - p * std::norm(ah) / (1.0 + p * ch.norm_sq());
  return log2_plus(1.0 / f);
}

double rate_from_cost(const ChannelVector& ch, double f) {
  return log2_plus((1.0 + ch.power() * ch.norm_sq()) / f);
}

Complex mmse_alpha(const ChannelVector& ch, const CoefficientVector& a) {
  if (a.size() != ch.size()) throw InvalidInput("coefficient vector and channel differ in size");
  Complex ah{0.0, 0.0};
  for (std::size_t l = 0; l < a.size(); ++l) ah += a.value(l) * std::conj(ch.gains()[l]);
  return ah * ch.power() / (1.0 + ch.power() * ch.norm_sq());
}

double rate_general(const ChannelVector& ch, const CoefficientVector& a, Complex alpha) {
  if (a.size() != ch.size()) throw InvalidInput("coefficient vector and channel differ in size");
  double mismatch = 0.0;
  for (std::size_t l = 0; l < a.size(); ++l) {
    mismatch += std::norm(alpha * ch.gains()[l] - a.value(l));
  }
  const double p = ch.power();
  return log2_plus(p / (std::norm(alpha) + p * mismatch));
}

double phi_bound(const ChannelVector& ch) { return std::sqrt(1.0 + ch.power() * ch.norm_sq()); }

CostMatrix mimo_gram(const ChannelMatrix& ch) {
  const auto& h = ch.gains();
  const auto users = h.cols();
  Eigen::JacobiSVD<ComplexMatrix> svd(h, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  if (!sv.allFinite()) throw NumericError("SVD of channel matrix failed");
  Eigen::VectorXd d = Eigen::VectorXd::Ones(users);
  for (Eigen::Index i = 0; i < sv.size(); ++i) d(i) = 1.0 / (1.0 + ch.power() * sv(i) * sv(i));
  const ComplexMatrix& v = svd.matrixV();
  ComplexMatrix m = v * d.asDiagonal() * v.adjoint();
  m = (0.5 * (m + m.adjoint())).eval();
  return CostMatrix(std::move(m));
}

double mimo_phi(const ChannelMatrix& ch) {
  Eigen::JacobiSVD<ComplexMatrix> svd(ch.gains());
  const double top = svd.singularValues()(0);
  return std::sqrt(1.0 + ch.power() * top * top);
}

ComplexRowVector b_opt(const ChannelMatrix& ch, const CoefficientVector& a) {
  const auto& h = ch.gains();
  if (static_cast<Eigen::Index>(a.size()) != h.cols()) {
    throw InvalidInput("coefficient vector and channel differ in size");
  }
  const auto k = h.rows();
  const ComplexMatrix gram =
      ComplexMatrix::Identity(k, k) / ch.power() + h * h.adjoint();
  const ComplexRowVector rhs = as_row(a) * h.adjoint();
  // b G = rhs  <=>  G^H b^H = rhs^H, and G is Hermitian.
  Eigen::LLT<ComplexMatrix> llt(gram);
  if (llt.info() != Eigen::Success) throw NumericError("I/P + H H^H is not positive definite");
  const Eigen::VectorXcd bt = llt.solve(rhs.adjoint());
  const ComplexRowVector b = bt.adjoint();
  const double residual = (b * gram - rhs).norm();
  if (residual > 1e-8 * std::max(1.0, rhs.norm())) {
    throw NumericError("integer-forcing solve residual too large");
  }
  return b;
}

double mimo_rate(const ChannelMatrix& ch, const CoefficientVector& a, const ComplexRowVector& b) {
  const auto& h = ch.gains();
  if (static_cast<Eigen::Index>(a.size()) != h.cols() || b.size() != h.rows()) {
    throw InvalidInput("dimension mismatch in mimo_rate");
  }
  const double p = ch.power();
  const double noise = b.squaredNorm() + p * (b * h - as_row(a)).squaredNorm();
  return 0.5 * log2_plus(p / noise);
}

}  // namespace cfsearch
