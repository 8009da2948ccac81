#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace cfsearch {

using Complex = std::complex<double>;

enum class Ring { Gaussian, Eisenstein };

std::string_view to_string(Ring ring);
// Accepts "gaussian" / "eisenstein" (case-insensitive); throws InvalidInput.
Ring parse_ring(std::string_view name);

inline constexpr double kSqrt3 = 1.7320508075688772935;

// re + im*j
struct GaussianInt {
  std::int64_t re = 0;
  std::int64_t im = 0;

  Complex value() const { return {static_cast<double>(re), static_cast<double>(im)}; }
  std::int64_t norm() const { return re * re + im * im; }
  bool is_zero() const { return re == 0 && im == 0; }

  friend GaussianInt operator*(GaussianInt x, GaussianInt y) {
    return {x.re * y.re - x.im * y.im, x.re * y.im + x.im * y.re};
  }
  friend bool operator==(const GaussianInt&, const GaussianInt&) = default;
  friend auto operator<=>(const GaussianInt&, const GaussianInt&) = default;
};

// a + b*omega with omega = -1/2 + j*sqrt(3)/2.
struct EisensteinInt {
  std::int64_t a = 0;
  std::int64_t b = 0;

  Complex value() const {
    return {static_cast<double>(a) - 0.5 * static_cast<double>(b),
            0.5 * kSqrt3 * static_cast<double>(b)};
  }
  std::int64_t norm() const { return a * a - a * b + b * b; }
  bool is_zero() const { return a == 0 && b == 0; }

  // omega^2 = -1 - omega
  friend EisensteinInt operator*(EisensteinInt x, EisensteinInt y) {
    return {x.a * y.a - x.b * y.b, x.a * y.b + x.b * y.a - x.b * y.b};
  }
  friend bool operator==(const EisensteinInt&, const EisensteinInt&) = default;
  friend auto operator<=>(const EisensteinInt&, const EisensteinInt&) = default;
};

// Nearest Gaussian integer, each component rounded half-up.
GaussianInt quantize_gaussian(Complex z);

// Nearest Eisenstein integer via the two-coset rectangular decoder.
// Distance ties go to the larger norm, then larger real part, then larger
// imaginary part.
EisensteinInt quantize_eisenstein(Complex z);

// Unchecked versions used in search inner loops.
namespace detail {
GaussianInt quantize_gaussian_unchecked(Complex z);
EisensteinInt quantize_eisenstein_unchecked(Complex z);
}  // namespace detail

std::vector<GaussianInt> gaussian_units();    // 1, j, -1, -j
std::vector<EisensteinInt> eisenstein_units();  // 1, 1+w, w, -1, -1-w, -w

// Length-L vector over one of the two rings.
class CoefficientVector {
 public:
  CoefficientVector() = default;
  explicit CoefficientVector(std::vector<GaussianInt> entries) : entries_(std::move(entries)) {}
  explicit CoefficientVector(std::vector<EisensteinInt> entries) : entries_(std::move(entries)) {}

  static CoefficientVector zeros(Ring ring, std::size_t size);

  Ring ring() const {
    return std::holds_alternative<std::vector<GaussianInt>>(entries_) ? Ring::Gaussian
                                                                      : Ring::Eisenstein;
  }
  std::size_t size() const;
  bool is_zero() const;
  // Squared Euclidean norm, exact.
  std::int64_t norm_sq() const;
  Complex value(std::size_t i) const;
  std::vector<Complex> values() const;
  void values_into(std::span<Complex> out) const;

  // Throws InvalidInput on ring mismatch.
  std::span<const GaussianInt> gaussian() const;
  std::span<const EisensteinInt> eisenstein() const;
  std::span<GaussianInt> gaussian();
  std::span<EisensteinInt> eisenstein();

  // Entrywise product with a ring element given as exact integer pair.
  CoefficientVector scaled(GaussianInt unit) const;
  CoefficientVector scaled(EisensteinInt unit) const;

  friend bool operator==(const CoefficientVector&, const CoefficientVector&) = default;

 private:
  std::variant<std::vector<GaussianInt>, std::vector<EisensteinInt>> entries_;
};

// All 4L (Gaussian) or 6L (Eisenstein) vectors with a single unit entry.
std::vector<CoefficientVector> unit_vectors(std::size_t length, Ring ring);

// True when a and b differ by multiplication with a ring unit.
bool unit_multiple(const CoefficientVector& a, const CoefficientVector& b);

std::string to_string(const CoefficientVector& a);

}  // namespace cfsearch
