#include "cfsearch/optimal_search.hpp"

#include <chrono>
#include <cmath>
#include <algorithm>
#include <cstdint>
#include <numbers>
#include <type_traits>

#include "candidate_tracker.hpp"
#include "cfsearch/errors.hpp"

namespace cfsearch {

namespace {

std::int64_t ceil_bound(double phi) {
  if (!(phi > 0.0) || !std::isfinite(phi)) throw InvalidInput("norm bound must be positive");
  return static_cast<std::int64_t>(std::ceil(phi));
}

std::int64_t mod4(std::int64_t v) { return ((v % 4) + 4) % 4; }

bool in_sector(Complex p, SectorReduction reduction) {
  switch (reduction) {
    case SectorReduction::None:
      return true;
    case SectorReduction::Quadrant:
      return p.real() > 0.0 && p.imag() >= 0.0;
    case SectorReduction::Sextant:
      return p.real() > 0.0 && p.imag() >= 0.0 && p.imag() < kSqrt3 * p.real();
  }
  return true;
}

void check_reduction(Ring ring, SectorReduction reduction) {
  if (reduction == SectorReduction::Quadrant && ring != Ring::Gaussian) {
    throw InvalidInput("quadrant reduction only applies to Z[j]");
  }
  if (reduction == SectorReduction::Sextant && ring != Ring::Eisenstein) {
    throw InvalidInput("sextant reduction only applies to Z[w]");
  }
}

bool on_rounding_boundary(double x) { return std::floor(x) + 0.5 == x; }

bool on_rounding_boundary(Complex z) {
  return on_rounding_boundary(z.real()) || on_rounding_boundary(z.imag());
}

// Multiplication by j^k and j^-k, exact in floating point.
Complex rotate(Complex z, int quarter_turns) {
  for (int i = 0; i < quarter_turns; ++i) z = {-z.imag(), z.real()};
  return z;
}

GaussianInt rotate_back(GaussianInt g, int quarter_turns) {
  for (int i = 0; i < quarter_turns; ++i) g = {g.im, -g.re};
  return g;
}

// Half-up rounding is not rotation-equivariant on cell boundaries, so the
// alphas dropped by a sector filter can quantize differently from rotated
// copies of the kept ones. For each kept alpha we also try the vectors the
// dropped rotations would have produced; they differ only in boundary
// components. Scalar multiples by units leave f unchanged.
class QuadrantVariants {
 public:
  explicit QuadrantVariants(std::size_t users) : values_(users), boundary_(users) {}

  std::span<Complex> values() { return values_; }

  template <typename Tracker>
  void offer(Tracker& tracker) {
    auto a = tracker.scratch();
    tracker.offer_scratch();
    std::size_t boundary_count = 0;
    for (std::size_t n = 0; n < values_.size(); ++n) {
      if (on_rounding_boundary(values_[n])) boundary_[boundary_count++] = n;
    }
    if (boundary_count == 0) return;

    base_.assign(a.begin(), a.end());
    seen_.clear();
    for (int k = 1; k < 4; ++k) {
      for (std::size_t b = 0; b < boundary_count; ++b) {
        const std::size_t n = boundary_[b];
        a[n] = rotate_back(detail::quantize_gaussian_unchecked(rotate(values_[n], k)), k);
      }
      bool fresh = !std::equal(a.begin(), a.end(), base_.begin());
      for (std::size_t v = 0; fresh && v < seen_.size(); v += a.size()) {
        fresh = !std::equal(a.begin(), a.end(), seen_.begin() + static_cast<std::ptrdiff_t>(v));
      }
      if (fresh) {
        seen_.insert(seen_.end(), a.begin(), a.end());
        tracker.offer_scratch();
      }
    }
    std::copy(base_.begin(), base_.end(), a.begin());
  }

 private:
  std::vector<Complex> values_;
  std::vector<std::size_t> boundary_;
  std::vector<GaussianInt> base_;
  std::vector<GaussianInt> seen_;
};

// On lattice-aligned channels one alpha can put several components on
// rounding boundaries at once, and the optimum may only be reached on the open
// cells meeting there, never by half-up rounding at the point itself. When a
// component other than the defining one is tied, quantize once inside every
// cone cut out by the boundary lines through alpha. Rounding commutes with
// unit rotations away from boundaries, so this is compatible with the sector
// reductions.
template <typename Element>
class TieCones {
 public:
  explicit TieCones(std::span<const Complex> gains)
      : gains_(gains), units_(detail::RingOps<Element>::units()), saved_(gains.size()) {}

  template <typename Tracker>
  void offer(Tracker& tracker, std::span<const Complex> z, std::size_t defining) {
    auto a = tracker.scratch();
    tied_.clear();
    angles_.clear();
    bool other_tied = false;
    double scale = 0.0;
    for (std::size_t n = 0; n < z.size(); ++n) {
      const Complex offset = z[n] - a[n].value();
      bool tied = false;
      for (const auto& u : units_) {
        const Complex uv = u.value();
        const double gap = std::norm(offset - uv) - std::norm(offset);
        if (std::abs(gap) > kTieTolerance) continue;
        tied = true;
        // delta moves component n by delta * h_n; the boundary is where that
        // step is orthogonal to u.
        angles_.push_back(std::fmod(std::arg(Complex(0.0, 1.0) * uv / gains_[n]) + 2 * std::numbers::pi, std::numbers::pi));
      }
      if (!tied) continue;
      tied_.push_back(n);
      scale = std::max(scale, std::abs(gains_[n]));
      other_tied = other_tied || n != defining;
    }
    if (!other_tied) return;

    std::sort(angles_.begin(), angles_.end());
    const std::size_t half = angles_.size();
    for (std::size_t i = 0; i < half; ++i) angles_.push_back(angles_[i] + std::numbers::pi);
    angles_.erase(std::unique(angles_.begin(), angles_.end(),
                              [](double x, double y) { return y - x < 1e-12; }),
                  angles_.end());

    std::copy(a.begin(), a.end(), saved_.begin());
    for (std::size_t i = 0; i < angles_.size(); ++i) {
      const double next = i + 1 < angles_.size() ? angles_[i + 1] : angles_[0] + 2 * std::numbers::pi;
      const Complex delta = std::polar(kConeStep / scale, 0.5 * (angles_[i] + next));
      for (const std::size_t n : tied_) {
        a[n] = detail::RingOps<Element>::quantize(z[n] + delta * gains_[n]);
      }
      tracker.offer_scratch();
    }
    std::copy(saved_.begin(), saved_.end(), a.begin());
  }

 private:
  static constexpr double kTieTolerance = 1e-9;
  static constexpr double kConeStep = 1e-7;

  std::span<const Complex> gains_;
  std::vector<Element> units_;
  std::vector<Element> saved_;
  std::vector<std::size_t> tied_;
  std::vector<double> angles_;
};

template <typename Element>
SearchResult run_search(const ChannelVector& ch, const DiscontinuitySet& psi,
                        SectorReduction reduction) {
  const auto start = std::chrono::steady_clock::now();
  const CostMatrix m = cost_matrix(ch);
  const auto gains = ch.gains();
  const std::size_t users = gains.size();
  const auto kept = reduce_sector(psi.points, reduction);

  // The component that defines alpha lands exactly on phi, so quantize phi
  // itself instead of (phi / h_l) * h_l.
  std::vector<Element> on_boundary(kept.size());
  for (std::size_t i = 0; i < kept.size(); ++i) {
    on_boundary[i] = detail::RingOps<Element>::quantize(kept[i]);
  }

  detail::CandidateTracker<Element> tracker(m, users);
  auto a = tracker.scratch();
  QuadrantVariants variants(users);
  auto z = variants.values();
  TieCones<Element> cones(gains);
  for (std::size_t l = 0; l < users; ++l) {
    if (gains[l] == Complex{}) continue;
    const Complex inv = 1.0 / gains[l];
    for (std::size_t i = 0; i < kept.size(); ++i) {
      const Complex alpha = kept[i] * inv;
      for (std::size_t n = 0; n < users; ++n) {
        z[n] = n == l ? kept[i] : alpha * gains[n];
        a[n] = n == l ? on_boundary[i] : detail::RingOps<Element>::quantize(z[n]);
      }
      cones.offer(tracker, z, l);
      if constexpr (std::is_same_v<Element, GaussianInt>) {
        if (reduction == SectorReduction::Quadrant) {
          variants.offer(tracker);
          continue;
        }
      } else {
        if (reduction == SectorReduction::Sextant) {
          // phi is the midpoint of two neighbours; try the other one too.
          tracker.offer_scratch();
          const EisensteinInt twice = detail::quantize_eisenstein_unchecked(2.0 * kept[i]);
          a[l] = {twice.a - on_boundary[i].a, twice.b - on_boundary[i].b};
          tracker.offer_scratch();
          continue;
        }
      }
      tracker.offer_scratch();
    }
  }
  if constexpr (std::is_same_v<Element, EisensteinInt>) {
    for (const auto& corner : gen_cell_corners_eisenstein(phi_bound(ch))) {
      if (!in_sector(corner.point, reduction)) continue;
      for (std::size_t l = 0; l < users; ++l) {
        if (gains[l] == Complex{}) continue;
        const Complex alpha = corner.point / gains[l];
        for (std::size_t n = 0; n < users; ++n) {
          z[n] = n == l ? corner.point : alpha * gains[n];
          a[n] = detail::quantize_eisenstein_unchecked(z[n]);
        }
        for (const auto& nearest : corner.nearest) {
          a[l] = nearest;
          tracker.offer_scratch();
        }
        cones.offer(tracker, z, l);
      }
    }
  }
  tracker.offer_unit_vectors();

  SearchResult result;
  result.a_opt = tracker.best();
  result.f_min = tracker.best_f();
  result.rate = rate_from_cost(ch, result.f_min);
  result.candidates_checked = tracker.checked();
  result.elapsed = std::chrono::steady_clock::now() - start;
  return result;
}

}  // namespace

SectorReduction default_reduction(Ring ring) {
  return ring == Ring::Gaussian ? SectorReduction::Quadrant : SectorReduction::None;
}

DiscontinuitySet gen_disc_gaussian(double phi) {
  const std::int64_t c = ceil_bound(phi);
  // Work in half units: the bound ceil(phi) + 1/2 becomes the integer 2c + 1.
  const std::int64_t r2 = 2 * c + 1;
  const double radius = static_cast<double>(c) + 0.5;

  DiscontinuitySet set;
  set.ring = Ring::Gaussian;
  set.bound = radius;
  for (std::int64_t x2 = -r2; x2 <= r2; ++x2) {
    const double re = 0.5 * static_cast<double>(x2);
    const auto span = static_cast<std::int64_t>(std::ceil(std::sqrt(radius * radius - re * re)));
    for (std::int64_t y2 = -2 * span; y2 <= 2 * span; ++y2) {
      if (x2 % 2 == 0 && y2 % 2 == 0) continue;  // Gaussian integer, not a boundary
      if (x2 * x2 + y2 * y2 > r2 * r2) continue;
      set.points.emplace_back(re, 0.5 * static_cast<double>(y2));
    }
  }
  return set;
}

DiscontinuitySet gen_disc_eisenstein(double phi) {
  const std::int64_t c = ceil_bound(phi);
  // Real part in quarter units, imaginary part in units of sqrt3/4; the bound
  // ceil(phi) + 3/4 becomes 4c + 3.
  const std::int64_t r4 = 4 * c + 3;
  const auto y_max = static_cast<std::int64_t>(std::floor(static_cast<double>(r4) / kSqrt3));

  DiscontinuitySet set;
  set.ring = Ring::Eisenstein;
  set.bound = static_cast<double>(c) + 0.75;
  for (std::int64_t x4 = -r4; x4 <= r4; ++x4) {
    for (std::int64_t y4 = -y_max; y4 <= y_max; ++y4) {
      if (x4 * x4 + 3 * y4 * y4 > r4 * r4) continue;
      const bool diagonal = (x4 % 2 != 0) && (y4 % 2 != 0);
      const bool odd_row = mod4(x4) == 0 && mod4(y4) == 2;
      const bool even_row = mod4(x4) == 2 && mod4(y4) == 0;
      if (!(diagonal || odd_row || even_row)) continue;
      set.points.emplace_back(0.25 * static_cast<double>(x4),
                              0.25 * kSqrt3 * static_cast<double>(y4));
    }
  }
  return set;
}

std::vector<CellCorner> gen_cell_corners_eisenstein(double phi) {
  const std::int64_t c = ceil_bound(phi);
  const double radius = static_cast<double>(c) + 0.75;
  // A lattice point owning a corner in the disc lies within radius + 1/sqrt3.
  const std::int64_t reach = c + 3;
  std::vector<CellCorner> corners;
  for (std::int64_t a = -2 * reach; a <= 2 * reach; ++a) {
    for (std::int64_t b = -2 * reach; b <= 2 * reach; ++b) {
      const EisensteinInt base{a, b};
      // Centroids of the up triangle {0, 1, 1+w} and the down triangle {0, 1+w, w}.
      const CellCorner up{base.value() + Complex(0.5, kSqrt3 / 6.0),
                          {base, EisensteinInt{a + 1, b}, EisensteinInt{a + 1, b + 1}}};
      const CellCorner down{base.value() + Complex(0.0, kSqrt3 / 3.0),
                            {base, EisensteinInt{a + 1, b + 1}, EisensteinInt{a, b + 1}}};
      for (const auto& corner : {up, down}) {
        if (std::abs(corner.point) <= radius) corners.push_back(corner);
      }
    }
  }
  std::sort(corners.begin(), corners.end(), [](const CellCorner& x, const CellCorner& y) {
    return x.point.real() != y.point.real() ? x.point.real() < y.point.real()
                                            : x.point.imag() < y.point.imag();
  });
  return corners;
}

DiscontinuitySet gen_disc(double phi, Ring ring) {
  return ring == Ring::Gaussian ? gen_disc_gaussian(phi) : gen_disc_eisenstein(phi);
}

std::vector<Complex> reduce_sector(const std::vector<Complex>& points, SectorReduction reduction) {
  if (reduction == SectorReduction::None) return points;
  std::vector<Complex> kept;
  kept.reserve(points.size() / 4 + 1);
  for (const auto& p : points) {
    if (in_sector(p, reduction)) kept.push_back(p);
  }
  return kept;
}

AlphaSet gen_alpha_set(const DiscontinuitySet& psi, const ChannelVector& ch,
                       SectorReduction reduction) {
  check_reduction(psi.ring, reduction);
  const auto kept = reduce_sector(psi.points, reduction);
  AlphaSet out;
  out.unit_vectors_only = true;
  for (const auto& h : ch.gains()) {
    if (h == Complex{}) continue;
    out.unit_vectors_only = false;
    for (const auto& p : kept) out.alphas.push_back(p / h);
  }
  return out;
}

SearchResult search_optimal(const ChannelVector& ch, Ring ring, SectorReduction reduction) {
  check_reduction(ring, reduction);
  const auto psi = gen_disc(phi_bound(ch), ring);
  if (ring == Ring::Gaussian) return run_search<GaussianInt>(ch, psi, reduction);
  return run_search<EisensteinInt>(ch, psi, reduction);
}

SearchResult search_optimal(const ChannelVector& ch, Ring ring) {
  return search_optimal(ch, ring, default_reduction(ring));
}

}  // namespace cfsearch
