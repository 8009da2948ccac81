#include "cfsearch/ring.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "cfsearch/errors.hpp"

namespace cfsearch {

std::string_view to_string(Ring ring) {
  return ring == Ring::Gaussian ? "gaussian" : "eisenstein";
}

Ring parse_ring(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "gaussian" || lower == "z[j]") return Ring::Gaussian;
  if (lower == "eisenstein" || lower == "z[w]") return Ring::Eisenstein;
  throw InvalidInput("unknown ring '" + std::string(name) + "'");
}

namespace {

void require_finite(Complex z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw InvalidInput("cannot quantize a non-finite value");
  }
}

inline std::int64_t round_half_up(double x) {
  return static_cast<std::int64_t>(std::floor(x + 0.5));
}

}  // namespace

namespace detail {

GaussianInt quantize_gaussian_unchecked(Complex z) {
  return {round_half_up(z.real()), round_half_up(z.imag())};
}

// A2 = B u (B + (1/2, sqrt3/2)), B = Z x sqrt3*Z.
EisensteinInt quantize_eisenstein_unchecked(Complex z) {
  const double x = z.real();
  const double y = z.imag();

  // Nearest point (u, sqrt3*m) of B, which is a + b*omega with b = 2m, a = u + m.
  const std::int64_t u0 = round_half_up(x);
  const std::int64_t m0 = round_half_up(y / kSqrt3);
  const double dx0 = x - static_cast<double>(u0);
  const double dy0 = y - kSqrt3 * static_cast<double>(m0);
  const double d0 = dx0 * dx0 + dy0 * dy0;

  // Nearest point of the coset: (u + 1/2, sqrt3*(m + 1/2)) -> b = 2m+1, a = u+m+1.
  const std::int64_t u1 = round_half_up(x - 0.5);
  const std::int64_t m1 = round_half_up((y - 0.5 * kSqrt3) / kSqrt3);
  const double dx1 = x - (static_cast<double>(u1) + 0.5);
  const double dy1 = y - kSqrt3 * (static_cast<double>(m1) + 0.5);
  const double d1 = dx1 * dx1 + dy1 * dy1;

  const EisensteinInt p0{u0 + m0, 2 * m0};
  const EisensteinInt p1{u1 + m1 + 1, 2 * m1 + 1};
  if (d0 < d1) return p0;
  if (d1 < d0) return p1;

  if (p0.norm() != p1.norm()) return p0.norm() > p1.norm() ? p0 : p1;
  const Complex v0 = p0.value();
  const Complex v1 = p1.value();
  if (v0.real() != v1.real()) return v0.real() > v1.real() ? p0 : p1;
  return v0.imag() >= v1.imag() ? p0 : p1;
}

}  // namespace detail

GaussianInt quantize_gaussian(Complex z) {
  require_finite(z);
  return detail::quantize_gaussian_unchecked(z);
}

EisensteinInt quantize_eisenstein(Complex z) {
  require_finite(z);
  return detail::quantize_eisenstein_unchecked(z);
}

std::vector<GaussianInt> gaussian_units() { return {{1, 0}, {0, 1}, {-1, 0}, {0, -1}}; }

std::vector<EisensteinInt> eisenstein_units() {
  return {{1, 0}, {1, 1}, {0, 1}, {-1, 0}, {-1, -1}, {0, -1}};
}

CoefficientVector CoefficientVector::zeros(Ring ring, std::size_t size) {
  if (ring == Ring::Gaussian) return CoefficientVector(std::vector<GaussianInt>(size));
  return CoefficientVector(std::vector<EisensteinInt>(size));
}

std::size_t CoefficientVector::size() const {
  return std::visit([](const auto& v) { return v.size(); }, entries_);
}

bool CoefficientVector::is_zero() const {
  return std::visit(
      [](const auto& v) {
        return std::all_of(v.begin(), v.end(), [](const auto& x) { return x.is_zero(); });
      },
      entries_);
}

std::int64_t CoefficientVector::norm_sq() const {
  return std::visit(
      [](const auto& v) {
        std::int64_t sum = 0;
        for (const auto& x : v) sum += x.norm();
        return sum;
      },
      entries_);
}

Complex CoefficientVector::value(std::size_t i) const {
  return std::visit([i](const auto& v) { return v.at(i).value(); }, entries_);
}

std::vector<Complex> CoefficientVector::values() const {
  std::vector<Complex> out(size());
  values_into(out);
  return out;
}

void CoefficientVector::values_into(std::span<Complex> out) const {
  std::visit(
      [out](const auto& v) {
        for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i].value();
      },
      entries_);
}

std::span<const GaussianInt> CoefficientVector::gaussian() const {
  const auto* v = std::get_if<std::vector<GaussianInt>>(&entries_);
  if (v == nullptr) throw InvalidInput("coefficient vector is not over Z[j]");
  return *v;
}

std::span<const EisensteinInt> CoefficientVector::eisenstein() const {
  const auto* v = std::get_if<std::vector<EisensteinInt>>(&entries_);
  if (v == nullptr) throw InvalidInput("coefficient vector is not over Z[w]");
  return *v;
}

std::span<GaussianInt> CoefficientVector::gaussian() {
  auto* v = std::get_if<std::vector<GaussianInt>>(&entries_);
  if (v == nullptr) throw InvalidInput("coefficient vector is not over Z[j]");
  return *v;
}

std::span<EisensteinInt> CoefficientVector::eisenstein() {
  auto* v = std::get_if<std::vector<EisensteinInt>>(&entries_);
  if (v == nullptr) throw InvalidInput("coefficient vector is not over Z[w]");
  return *v;
}

CoefficientVector CoefficientVector::scaled(GaussianInt unit) const {
  std::vector<GaussianInt> out(gaussian().begin(), gaussian().end());
  for (auto& x : out) x = x * unit;
  return CoefficientVector(std::move(out));
}

CoefficientVector CoefficientVector::scaled(EisensteinInt unit) const {
  std::vector<EisensteinInt> out(eisenstein().begin(), eisenstein().end());
  for (auto& x : out) x = x * unit;
  return CoefficientVector(std::move(out));
}

std::vector<CoefficientVector> unit_vectors(std::size_t length, Ring ring) {
  if (length == 0) throw InvalidInput("unit_vectors: length must be positive");
  std::vector<CoefficientVector> out;
  if (ring == Ring::Gaussian) {
    const auto units = gaussian_units();
    out.reserve(units.size() * length);
    for (std::size_t l = 0; l < length; ++l) {
      for (const auto& u : units) {
        std::vector<GaussianInt> v(length);
        v[l] = u;
        out.emplace_back(std::move(v));
      }
    }
  } else {
    const auto units = eisenstein_units();
    out.reserve(units.size() * length);
    for (std::size_t l = 0; l < length; ++l) {
      for (const auto& u : units) {
        std::vector<EisensteinInt> v(length);
        v[l] = u;
        out.emplace_back(std::move(v));
      }
    }
  }
  return out;
}

bool unit_multiple(const CoefficientVector& a, const CoefficientVector& b) {
  if (a.ring() != b.ring() || a.size() != b.size()) return false;
  if (a.ring() == Ring::Gaussian) {
    for (const auto& u : gaussian_units()) {
      if (a.scaled(u) == b) return true;
    }
  } else {
    for (const auto& u : eisenstein_units()) {
      if (a.scaled(u) == b) return true;
    }
  }
  return false;
}

std::string to_string(const CoefficientVector& a) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i != 0) os << ", ";
    if (a.ring() == Ring::Gaussian) {
      const auto x = a.gaussian()[i];
      os << x.re << (x.im < 0 ? "-" : "+") << std::abs(x.im) << 'j';
    } else {
      const auto x = a.eisenstein()[i];
      os << x.a << (x.b < 0 ? "-" : "+") << std::abs(x.b) << 'w';
    }
  }
  os << ']';
  return os.str();
}

}  // namespace cfsearch
