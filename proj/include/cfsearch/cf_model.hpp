#pragma once

#include <chrono>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "cfsearch/ring.hpp"

namespace cfsearch {

using ComplexMatrix = Eigen::MatrixXcd;
using ComplexRowVector = Eigen::RowVectorXcd;

// Single-antenna relay: gains h_l and transmit power P (linear SNR).
class ChannelVector {
 public:
  ChannelVector(std::vector<Complex> gains, double power);

  std::span<const Complex> gains() const { return gains_; }
  std::size_t size() const { return gains_.size(); }
  double power() const { return power_; }
  double norm_sq() const;

 private:
  std::vector<Complex> gains_;
  double power_;
};

// k x L channel seen by a k-antenna relay.
class ChannelMatrix {
 public:
  ChannelMatrix(ComplexMatrix gains, double power);
  explicit ChannelMatrix(const ChannelVector& row);

  const ComplexMatrix& gains() const { return gains_; }
  std::size_t antennas() const { return static_cast<std::size_t>(gains_.rows()); }
  std::size_t users() const { return static_cast<std::size_t>(gains_.cols()); }
  double power() const { return power_; }

  // Only valid for k == 1.
  ChannelVector row_channel() const;

 private:
  ComplexMatrix gains_;
  double power_;
};

// Hermitian positive-definite Gram matrix defining f(a) = a M a^H.
class CostMatrix {
 public:
  // Symmetrizes, then verifies Hermitian symmetry (1e-12 elementwise before
  // scrubbing, scaled by the largest entry) and positive definiteness.
  explicit CostMatrix(ComplexMatrix m);

  const ComplexMatrix& matrix() const { return m_; }
  std::size_t size() const { return static_cast<std::size_t>(m_.rows()); }
  // Lower-triangular factor with M = C C^H.
  const ComplexMatrix& cholesky() const { return chol_; }
  double min_diagonal() const;

  // a M a^H for a complex row vector; no validation.
  double quadratic_form(std::span<const Complex> a) const;

 private:
  ComplexMatrix m_;
  ComplexMatrix chol_;
};

struct SearchResult {
  CoefficientVector a_opt;
  double f_min = 0.0;
  double rate = 0.0;  // bits per complex channel use
  std::uint64_t candidates_checked = 0;
  std::chrono::nanoseconds elapsed{0};
};

// max(0, log2(x))
double log2_plus(double x);

CostMatrix cost_matrix(const ChannelVector& ch);

// f(a) = a M a^H. Throws InvalidInput on a zero vector or size mismatch.
double cost(const CoefficientVector& a, const CostMatrix& m);

// Computation rate with the MMSE scaling substituted, log2+(1/f(a)).
double rate(const ChannelVector& ch, const CoefficientVector& a);

// Rate of a vector whose cost under cost_matrix(ch) is f. That matrix is
// (1 + P ||h||^2) times the MMSE noise form, hence the rescaling.
double rate_from_cost(const ChannelVector& ch, double f);

Complex mmse_alpha(const ChannelVector& ch, const CoefficientVector& a);

// Rate for an arbitrary scaling alpha (not maximized).
double rate_general(const ChannelVector& ch, const CoefficientVector& a, Complex alpha);

// Norm bound sqrt(1 + P ||h||^2) beyond which the rate is zero.
double phi_bound(const ChannelVector& ch);

// V D V^H with D = diag((1+P s_i^2)^-1 for the k singular values, 1 otherwise).
CostMatrix mimo_gram(const ChannelMatrix& ch);

double mimo_phi(const ChannelMatrix& ch);

// Optimal integer-forcing vector a H^H (I/P + H H^H)^-1.
ComplexRowVector b_opt(const ChannelMatrix& ch, const CoefficientVector& a);

// (1/2) log2+(P / (||b||^2 + P ||bH - a||^2))
double mimo_rate(const ChannelMatrix& ch, const CoefficientVector& a, const ComplexRowVector& b);

}  // namespace cfsearch
