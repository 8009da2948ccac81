#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "cfsearch/baselines.hpp"
#include "cfsearch/bench.hpp"
#include "cfsearch/errors.hpp"
#include "cfsearch/optimal_search.hpp"
#include "oracles.hpp"

using namespace cfsearch;

namespace {

const Complex j{0.0, 1.0};

bool is_half_multiple(double v) {
  const double twice = 2.0 * v;
  return twice == std::round(twice);
}

std::set<std::pair<double, double>> as_set(const std::vector<Complex>& pts) {
  std::set<std::pair<double, double>> out;
  for (const auto& p : pts) out.emplace(std::round(p.real() * 1e9), std::round(p.imag() * 1e9));
  return out;
}

}  // namespace

TEST(GaussianDisc, CountsAtUnitBound) {
  // Full square of side 3: every half-unit point with at least one
  // non-integer coordinate.
  int square = 0;
  for (int x2 = -3; x2 <= 3; ++x2) {
    for (int y2 = -3; y2 <= 3; ++y2) {
      if (x2 % 2 != 0 || y2 % 2 != 0) ++square;
    }
  }
  EXPECT_EQ(square, 40);
  const auto psi = gen_disc_gaussian(1.0);
  EXPECT_EQ(psi.points.size(), 20u);
  EXPECT_DOUBLE_EQ(psi.bound, 1.5);
}

TEST(GaussianDisc, MatchesBoundaryOracle) {
  for (const double phi : {0.3, 1.0, 2.2, 4.58, 9.9}) {
    const auto psi = gen_disc_gaussian(phi);
    const auto expected = oracle::gaussian_boundary_points(std::ceil(phi) + 0.5);
    EXPECT_EQ(psi.points.size(), expected.size()) << phi;
    EXPECT_EQ(as_set(psi.points), as_set(expected)) << phi;
  }
}

TEST(GaussianDisc, FormsBoundsOrderAndUniqueness) {
  const auto psi = gen_disc_gaussian(6.3);
  EXPECT_EQ(as_set(psi.points).size(), psi.points.size());
  for (std::size_t i = 0; i < psi.points.size(); ++i) {
    const Complex p = psi.points[i];
    EXPECT_TRUE(is_half_multiple(p.real()) && is_half_multiple(p.imag()));
    EXPECT_FALSE(p.real() == std::round(p.real()) && p.imag() == std::round(p.imag()));
    EXPECT_LE(std::abs(p), psi.bound + 1e-12);
    if (i > 0) {
      const Complex q = psi.points[i - 1];
      EXPECT_TRUE(q.real() < p.real() || (q.real() == p.real() && q.imag() < p.imag()));
    }
  }
}

TEST(EisensteinDisc, FamilyMembership) {
  const auto psi = gen_disc_eisenstein(1.0);
  const auto has = [&](Complex z) {
    return std::any_of(psi.points.begin(), psi.points.end(),
                       [&](Complex p) { return std::abs(p - z) < 1e-12; });
  };
  EXPECT_TRUE(has({0.5, 0.0}));
  EXPECT_TRUE(has({0.25, kSqrt3 / 4}));
  EXPECT_TRUE(has({0.0, kSqrt3 / 2}));
  EXPECT_FALSE(has({0.0, 0.0}));
  EXPECT_FALSE(has({-0.5, kSqrt3 / 2}));  // omega itself
  EXPECT_DOUBLE_EQ(psi.bound, 1.75);
}

TEST(EisensteinDisc, MatchesMidpointOracle) {
  for (const double phi : {1.0, 2.5, 4.58}) {
    const auto psi = gen_disc_eisenstein(phi);
    const auto expected = oracle::eisenstein_midpoints(std::ceil(phi) + 0.75);
    EXPECT_EQ(psi.points.size(), expected.size()) << phi;
    EXPECT_EQ(as_set(psi.points), as_set(expected)) << phi;
    for (const auto& p : psi.points) {
      EXPECT_LE(std::abs(p), psi.bound + 1e-12);
      // A boundary point is never a lattice point.
      EXPECT_GT(std::abs(quantize_eisenstein(p).value() - p), 0.4);
    }
  }
}

TEST(EisensteinCorners, ThreeWayTiesInsideBound) {
  const auto corners = gen_cell_corners_eisenstein(2.0);
  // Two corners per lattice point: about 2 * area / (sqrt3 / 2).
  const double expected = 2.0 * 3.14159265358979 * 2.75 * 2.75 / (kSqrt3 / 2.0);
  EXPECT_NEAR(static_cast<double>(corners.size()), expected, 0.1 * expected);
  for (std::size_t i = 0; i < corners.size(); ++i) {
    const auto& c = corners[i];
    EXPECT_LE(std::abs(c.point), 2.75);
    for (const auto& e : c.nearest) EXPECT_NEAR(std::abs(c.point - e.value()), 1.0 / kSqrt3, 1e-12);
    // No lattice point is closer than the three listed ones.
    const auto q = quantize_eisenstein(c.point);
    EXPECT_NEAR(std::abs(c.point - q.value()), 1.0 / kSqrt3, 1e-12);
    if (i > 0) {
      const auto& p = corners[i - 1].point;
      EXPECT_TRUE(p.real() < c.point.real() ||
                  (p.real() == c.point.real() && p.imag() < c.point.imag()));
    }
  }
}

TEST(AlphaSet, Sizes) {
  const auto psi = gen_disc_gaussian(3.0);
  const ChannelVector one({1.0}, 1.0);
  const auto full = gen_alpha_set(psi, one, SectorReduction::None);
  ASSERT_EQ(full.alphas.size(), psi.points.size());
  for (std::size_t i = 0; i < psi.points.size(); ++i) EXPECT_EQ(full.alphas[i], psi.points[i]);

  const auto reduced = gen_alpha_set(psi, one, SectorReduction::Quadrant);
  EXPECT_EQ(reduced.alphas.size() * 4, psi.points.size());

  const auto partial = gen_alpha_set(psi, ChannelVector({1.0, 0.0}, 1.0), SectorReduction::None);
  EXPECT_EQ(partial.alphas.size(), psi.points.size());

  const auto none = gen_alpha_set(psi, ChannelVector({0.0, 0.0}, 1.0), SectorReduction::None);
  EXPECT_TRUE(none.unit_vectors_only);
  EXPECT_TRUE(none.alphas.empty());

  std::mt19937_64 rng(31);
  const auto ch = oracle::random_vector_channel(rng, 4, 10.0);
  const auto psi2 = gen_disc_gaussian(phi_bound(ch));
  EXPECT_EQ(gen_alpha_set(psi2, ch, SectorReduction::None).alphas.size(),
            ch.size() * psi2.points.size());
  EXPECT_LE(gen_alpha_set(psi2, ch, SectorReduction::Quadrant).alphas.size(),
            ch.size() * psi2.points.size());
}

TEST(AlphaSet, ReductionRingMismatch) {
  const auto eis = gen_disc_eisenstein(2.0);
  EXPECT_THROW(gen_alpha_set(eis, ChannelVector({1.0}, 1.0), SectorReduction::Quadrant),
               InvalidInput);
  EXPECT_THROW(search_optimal(ChannelVector({1.0}, 1.0), Ring::Gaussian, SectorReduction::Sextant),
               InvalidInput);
}

TEST(SearchOptimal, SingleUser) {
  for (const Ring ring : {Ring::Gaussian, Ring::Eisenstein}) {
    for (const Complex h : {Complex(1, 0), Complex(0.3, -2.0), Complex(-7, 1)}) {
      const auto r = search_optimal(ChannelVector({h}, 10.0), ring);
      EXPECT_NEAR(r.f_min, 1.0, 1e-12);
      EXPECT_EQ(r.a_opt.norm_sq(), 1);
    }
  }
}

TEST(SearchOptimal, Examples) {
  const CoefficientVector one_j(std::vector<GaussianInt>{{1, 0}, {0, 1}});
  const auto r = search_optimal(ChannelVector({1.0, j}, 10.0), Ring::Gaussian);
  EXPECT_NEAR(r.f_min, 2.0, 1e-12);
  EXPECT_TRUE(unit_multiple(r.a_opt, one_j));
  EXPECT_NEAR(r.rate, std::log2(21.0 / 2.0), 1e-12);

  const CoefficientVector ones(std::vector<GaussianInt>{{1, 0}, {1, 0}});
  const auto s = search_optimal(ChannelVector({1.0, 1.0}, 10.0), Ring::Gaussian);
  EXPECT_NEAR(s.f_min, 2.0, 1e-12);
  EXPECT_TRUE(unit_multiple(s.a_opt, ones));
}

TEST(SearchOptimal, ResultInvariants) {
  std::mt19937_64 rng(32);
  for (int t = 0; t < 100; ++t) {
    for (const Ring ring : {Ring::Gaussian, Ring::Eisenstein}) {
      const auto ch = oracle::random_vector_channel(rng, 3, 31.6);
      const auto m = cost_matrix(ch);
      const auto r = search_optimal(ch, ring);
      EXPECT_FALSE(r.a_opt.is_zero());
      EXPECT_NEAR(cost(r.a_opt, m), r.f_min, 1e-9 * r.f_min);
      EXPECT_NEAR(rate(ch, r.a_opt), r.rate, 1e-9 * std::max(1.0, r.rate));
      EXPECT_LE(r.f_min, m.min_diagonal() * (1 + 1e-12));
      const auto again = search_optimal(ch, ring);
      EXPECT_EQ(again.a_opt, r.a_opt);
    }
  }
}

TEST(SearchOptimal, ZeroChannelFallsBackToUnits) {
  const auto r = search_optimal(ChannelVector({0.0, 0.0, 0.0}, 10.0), Ring::Gaussian);
  EXPECT_NEAR(r.f_min, 1.0, 1e-12);
  EXPECT_EQ(r.a_opt.norm_sq(), 1);
}

// Grid oracle: independent odometer over the whole box.
TEST(SearchOptimal, MatchesGridOracle) {
  std::mt19937_64 rng(33);
  for (const Ring ring : {Ring::Gaussian, Ring::Eisenstein}) {
    for (const double p : {1.0, 3.16, 10.0}) {
      for (int t = 0; t < 15; ++t) {
        const auto ch = oracle::random_vector_channel(rng, 2, p);
        const double expected = oracle::grid_min_cost(cost_matrix(ch), phi_bound(ch), ring);
        EXPECT_TRUE(oracle::same_cost(search_optimal(ch, ring).f_min, expected))
            << to_string(ring) << " P=" << p << " trial " << t;
      }
    }
  }
}

TEST(SearchOptimal, MatchesExhaustive) {
  std::mt19937_64 rng(34);
  for (const Ring ring : {Ring::Gaussian, Ring::Eisenstein}) {
    for (const std::size_t users : {2u, 3u, 4u}) {
      for (const double snr : {0.0, 10.0, 20.0}) {
        for (int t = 0; t < 40; ++t) {
          const auto ch = oracle::random_vector_channel(rng, users, std::pow(10.0, snr / 10));
          const double f_ref =
              exhaustive_search(cost_matrix(ch), phi_bound(ch), ring, ExhaustiveMode::CostPruned)
                  .f_min;
          ASSERT_TRUE(oracle::same_cost(search_optimal(ch, ring).f_min, f_ref))
              << to_string(ring) << " L=" << users << " snr=" << snr << " trial " << t;
        }
      }
    }
  }
}

TEST(SearchOptimal, ReductionsAreSound) {
  std::mt19937_64 rng(35);
  for (const double snr : {0.0, 10.0, 20.0}) {
    for (int t = 0; t < 200; ++t) {
      const auto ch = oracle::random_vector_channel(rng, 3, std::pow(10.0, snr / 10));
      EXPECT_TRUE(oracle::same_cost(
          search_optimal(ch, Ring::Gaussian, SectorReduction::Quadrant).f_min,
          search_optimal(ch, Ring::Gaussian, SectorReduction::None).f_min));
      EXPECT_TRUE(oracle::same_cost(
          search_optimal(ch, Ring::Eisenstein, SectorReduction::Sextant).f_min,
          search_optimal(ch, Ring::Eisenstein, SectorReduction::None).f_min));
    }
  }
}

// Channels whose alphas put several components exactly on rounding
// boundaries at once: the case a plain sector filter gets wrong, and where
// half-up rounding at the boundary point alone misses the optimum.
TEST(SearchOptimal, QuadrantSoundOnLatticeAlignedChannels) {
  for (int a = -2; a <= 2; ++a) {
    for (int b = -2; b <= 2; ++b) {
      for (int c = 1; c <= 2; ++c) {
        const ChannelVector ch({Complex(c, 0), Complex(a, b), Complex(0.5 * a, 0.5 * c)}, 7.0);
        const double f_ref = exhaustive_search(cost_matrix(ch), phi_bound(ch), Ring::Gaussian,
                                               ExhaustiveMode::CostPruned)
                                 .f_min;
        EXPECT_TRUE(oracle::same_cost(
            search_optimal(ch, Ring::Gaussian, SectorReduction::Quadrant).f_min, f_ref));
      }
    }
  }
}

TEST(SearchOptimal, QuadrantFewerCandidates) {
  const ChannelVector one({1.0}, 1.0);
  const auto psi = gen_disc_gaussian(phi_bound(one));
  const auto reduced = search_optimal(one, Ring::Gaussian, SectorReduction::Quadrant);
  const auto full = search_optimal(one, Ring::Gaussian, SectorReduction::None);
  EXPECT_EQ(reduced.f_min, full.f_min);
  EXPECT_LT(reduced.candidates_checked, full.candidates_checked);
  EXPECT_LE(full.candidates_checked, psi.points.size() + 4);
}

TEST(SearchOptimal, LatticeAlignedChannelsBothRings) {
  std::mt19937_64 rng(61);
  std::uniform_int_distribution<int> coord(-4, 4);
  const Complex omega(-0.5, kSqrt3 / 2.0);
  for (int t = 0; t < 600; ++t) {
    const std::size_t users = 2 + static_cast<std::size_t>(t % 3);
    std::vector<Complex> gains;
    for (std::size_t i = 0; i < users; ++i) {
      const double x = 0.5 * coord(rng);
      const double y = 0.5 * coord(rng);
      gains.push_back(t % 2 ? x + y * omega : Complex(x, y));
    }
    const ChannelVector ch(gains, std::pow(10.0, (t % 4) * 0.5));
    for (const Ring ring : {Ring::Gaussian, Ring::Eisenstein}) {
      const double f_ref =
          exhaustive_search(cost_matrix(ch), phi_bound(ch), ring, ExhaustiveMode::CostPruned).f_min;
      const auto reduced = ring == Ring::Gaussian ? SectorReduction::Quadrant : SectorReduction::Sextant;
      EXPECT_TRUE(oracle::same_cost(search_optimal(ch, ring, SectorReduction::None).f_min, f_ref))
          << to_string(ring) << " trial " << t;
      EXPECT_TRUE(oracle::same_cost(search_optimal(ch, ring, reduced).f_min, f_ref))
          << to_string(ring) << " trial " << t;
    }
  }
}

// A generic channel whose Eisenstein optimum is reachable only from a cell
// corner, not from any edge midpoint.
TEST(SearchOptimal, EisensteinOptimumAtCellCorner) {
  const ChannelVector ch =
      ChannelMatrix(bench::gen_channel(4, 1, 81, 1000663), 10.0).row_channel();
  const double f_ref = exhaustive_search(cost_matrix(ch), phi_bound(ch), Ring::Eisenstein,
                                         ExhaustiveMode::CostPruned)
                           .f_min;
  EXPECT_NEAR(f_ref, 12.2088061, 1e-6);
  EXPECT_TRUE(oracle::same_cost(search_optimal(ch, Ring::Eisenstein).f_min, f_ref));
  EXPECT_TRUE(oracle::same_cost(
      search_optimal(ch, Ring::Eisenstein, SectorReduction::Sextant).f_min, f_ref));
}
