#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "cfsearch/cf_model.hpp"
#include "cfsearch/ring.hpp"

namespace cfsearch::detail {

template <typename Element>
struct RingOps;

template <>
struct RingOps<GaussianInt> {
  static constexpr Ring ring = Ring::Gaussian;
  static GaussianInt quantize(Complex z) { return quantize_gaussian_unchecked(z); }
  static std::vector<GaussianInt> units() { return gaussian_units(); }
};

template <>
struct RingOps<EisensteinInt> {
  static constexpr Ring ring = Ring::Eisenstein;
  static EisensteinInt quantize(Complex z) { return quantize_eisenstein_unchecked(z); }
  static std::vector<EisensteinInt> units() { return eisenstein_units(); }
};

// Running minimum of f(a) = a M a^H over offered candidates. The first
// candidate reaching a value wins; later equal values do not replace it.
template <typename Element>
class CandidateTracker {
 public:
  CandidateTracker(const CostMatrix& m, std::size_t length)
      : m_(m), scratch_(length), values_(length), best_(length) {}

  std::span<Element> scratch() { return scratch_; }

  // Evaluates the vector currently in scratch(). Zero vectors are skipped.
  bool offer_scratch() {
    bool nonzero = false;
    for (std::size_t i = 0; i < scratch_.size(); ++i) {
      values_[i] = scratch_[i].value();
      nonzero = nonzero || !scratch_[i].is_zero();
    }
    if (!nonzero) return false;
    ++checked_;
    const double f = m_.quadratic_form(values_);
    if (f < best_f_) {
      best_f_ = f;
      best_ = scratch_;
      return true;
    }
    return false;
  }

  void offer_unit_vectors() {
    for (std::size_t l = 0; l < scratch_.size(); ++l) {
      for (const auto& u : RingOps<Element>::units()) {
        std::fill(scratch_.begin(), scratch_.end(), Element{});
        scratch_[l] = u;
        offer_scratch();
      }
    }
  }

  double best_f() const { return best_f_; }
  bool has_best() const { return best_f_ < std::numeric_limits<double>::infinity(); }
  std::uint64_t checked() const { return checked_; }
  CoefficientVector best() const { return CoefficientVector(best_); }

 private:
  const CostMatrix& m_;
  std::vector<Element> scratch_;
  std::vector<Complex> values_;
  std::vector<Element> best_;
  double best_f_ = std::numeric_limits<double>::infinity();
  std::uint64_t checked_ = 0;
};

}  // namespace cfsearch::detail
