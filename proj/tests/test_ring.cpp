#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>

#include "cfsearch/errors.hpp"
#include "cfsearch/ring.hpp"
#include "oracles.hpp"

using namespace cfsearch;

TEST(GaussianQuantizer, Examples) {
  EXPECT_EQ(quantize_gaussian({1.3, -2.8}), (GaussianInt{1, -3}));
  EXPECT_EQ(quantize_gaussian({-0.5, 0.5}), (GaussianInt{0, 1}));
  EXPECT_EQ(quantize_gaussian({2.5, -1.5}), (GaussianInt{3, -1}));
}

TEST(GaussianQuantizer, RejectsNonFinite) {
  EXPECT_THROW(quantize_gaussian({std::nan(""), 0.0}), InvalidInput);
  EXPECT_THROW(quantize_gaussian({0.0, std::numeric_limits<double>::infinity()}), InvalidInput);
}

TEST(GaussianQuantizer, HalfIntegersRoundUp) {
  for (int x2 = -21; x2 <= 21; x2 += 2) {
    for (int y2 = -21; y2 <= 21; y2 += 2) {
      const GaussianInt q = quantize_gaussian({0.5 * x2, 0.5 * y2});
      EXPECT_DOUBLE_EQ(static_cast<double>(q.re), 0.5 * x2 + 0.5);
      EXPECT_DOUBLE_EQ(static_cast<double>(q.im), 0.5 * y2 + 0.5);
    }
  }
}

TEST(GaussianQuantizer, ErrorInHalfOpenInterval) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  for (int i = 0; i < 100000; ++i) {
    const Complex z(u(rng), u(rng));
    const Complex err = z - quantize_gaussian(z).value();
    ASSERT_GE(err.real(), -0.5);
    ASSERT_LT(err.real(), 0.5);
    ASSERT_GE(err.imag(), -0.5);
    ASSERT_LT(err.imag(), 0.5);
  }
}

TEST(EisensteinQuantizer, Examples) {
  EXPECT_EQ(quantize_eisenstein({0.0, 0.0}), (EisensteinInt{0, 0}));
  EXPECT_EQ(quantize_eisenstein({-0.5, kSqrt3 / 2}), (EisensteinInt{0, 1}));
  EXPECT_EQ(quantize_eisenstein({0.45, 0.78}), (EisensteinInt{1, 1}));
}

TEST(EisensteinQuantizer, RejectsNonFinite) {
  EXPECT_THROW(quantize_eisenstein({std::nan(""), 0.0}), InvalidInput);
}

TEST(EisensteinQuantizer, CoveringRadius) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-40.0, 40.0);
  for (int i = 0; i < 100000; ++i) {
    const Complex z(u(rng), u(rng));
    ASSERT_LE(std::abs(z - quantize_eisenstein(z).value()), 1.0 / kSqrt3 + 1e-12);
  }
}

TEST(EisensteinQuantizer, TieGoesToLargerNorm) {
  // 1/2 sits between 0 and 1; 1 has the larger norm.
  EXPECT_EQ(quantize_eisenstein({0.5, 0.0}), (EisensteinInt{1, 0}));
  // Midpoint of 1 and 1+w: equal norms, so the larger real part wins.
  const Complex mid = 0.5 * (EisensteinInt{1, 0}.value() + EisensteinInt{1, 1}.value());
  EXPECT_EQ(quantize_eisenstein(mid), (EisensteinInt{1, 0}));
}

TEST(Quantizers, NearestPointProperty) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-20.0, 20.0);
  for (int i = 0; i < 20000; ++i) {
    const Complex z(u(rng), u(rng));
    const auto g = quantize_gaussian(z);
    const double dg = std::abs(z - g.value());
    for (const auto& cand : oracle::gaussian_near(g.value(), 2.0)) {
      ASSERT_LE(dg, std::abs(z - cand.value()) + 1e-12);
    }
    const auto e = quantize_eisenstein(z);
    const double de = std::abs(z - e.value());
    for (const auto& cand : oracle::eisenstein_near(e.value(), 2.0)) {
      ASSERT_LE(de, std::abs(z - cand.value()) + 1e-12);
    }
  }
}

TEST(Quantizers, Idempotent) {
  for (std::int64_t a = -12; a <= 12; ++a) {
    for (std::int64_t b = -12; b <= 12; ++b) {
      const GaussianInt g{a, b};
      EXPECT_EQ(quantize_gaussian(g.value()), g);
      const EisensteinInt e{a, b};
      EXPECT_EQ(quantize_eisenstein(e.value()), e);
    }
  }
}

TEST(Units, ClosurePreservesNorm) {
  for (std::int64_t a = -5; a <= 5; ++a) {
    for (std::int64_t b = -5; b <= 5; ++b) {
      for (const auto& u : gaussian_units()) {
        const GaussianInt g{a, b};
        EXPECT_EQ((g * u).norm(), g.norm());
        EXPECT_LT(std::abs((g * u).value() - g.value() * u.value()), 1e-12);
      }
      for (const auto& u : eisenstein_units()) {
        const EisensteinInt e{a, b};
        EXPECT_EQ((e * u).norm(), e.norm());
        EXPECT_LT(std::abs((e * u).value() - e.value() * u.value()), 1e-9);
      }
    }
  }
  for (const auto& u : eisenstein_units()) EXPECT_EQ(u.norm(), 1);
}

TEST(UnitVectors, CountsAndShape) {
  EXPECT_EQ(unit_vectors(1, Ring::Gaussian).size(), 4u);
  EXPECT_EQ(unit_vectors(2, Ring::Gaussian).size(), 8u);
  const auto eis = unit_vectors(2, Ring::Eisenstein);
  ASSERT_EQ(eis.size(), 12u);
  // w^2 = -1 - w
  const CoefficientVector w2(std::vector<EisensteinInt>{{-1, -1}, {0, 0}});
  EXPECT_NE(std::find(eis.begin(), eis.end(), w2), eis.end());
  for (const Ring ring : {Ring::Gaussian, Ring::Eisenstein}) {
    const auto vs = unit_vectors(3, ring);
    std::set<std::string> seen;
    for (const auto& v : vs) {
      EXPECT_EQ(v.norm_sq(), 1);
      seen.insert(to_string(v));
    }
    EXPECT_EQ(seen.size(), vs.size());
  }
  EXPECT_THROW(unit_vectors(0, Ring::Gaussian), InvalidInput);
}

TEST(EisensteinInt, ValueAndNorm) {
  const EisensteinInt w{0, 1};
  EXPECT_NEAR(w.value().real(), -0.5, 1e-15);
  EXPECT_NEAR(w.value().imag(), kSqrt3 / 2, 1e-15);
  EXPECT_EQ((w * w), (EisensteinInt{-1, -1}));
  EXPECT_EQ((EisensteinInt{2, 1}).norm(), 3);
}

TEST(RingNames, Parse) {
  EXPECT_EQ(parse_ring("gaussian"), Ring::Gaussian);
  EXPECT_EQ(parse_ring("Eisenstein"), Ring::Eisenstein);
  EXPECT_THROW(parse_ring("hurwitz"), InvalidInput);
}

TEST(CoefficientVector, UnitMultiple) {
  const CoefficientVector a(std::vector<GaussianInt>{{1, 0}, {0, 1}});
  EXPECT_TRUE(unit_multiple(a, a.scaled(GaussianInt{0, 1})));
  EXPECT_FALSE(unit_multiple(a, CoefficientVector(std::vector<GaussianInt>{{1, 0}, {1, 0}})));
  EXPECT_THROW(a.eisenstein(), InvalidInput);
}
