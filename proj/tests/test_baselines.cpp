#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "cfsearch/baselines.hpp"
#include "cfsearch/errors.hpp"
#include "cfsearch/optimal_search.hpp"
#include "oracles.hpp"

using namespace cfsearch;

namespace {

const Complex j{0.0, 1.0};

// Exact determinant of a Gaussian-integer matrix by cofactor expansion.
GaussianInt det_exact(const std::vector<std::vector<GaussianInt>>& a) {
  const std::size_t n = a.size();
  if (n == 1) return a[0][0];
  GaussianInt total{0, 0};
  for (std::size_t c = 0; c < n; ++c) {
    std::vector<std::vector<GaussianInt>> minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<GaussianInt> row;
      for (std::size_t k = 0; k < n; ++k) {
        if (k != c) row.push_back(a[r][k]);
      }
      minor.push_back(row);
    }
    GaussianInt term = a[0][c] * det_exact(minor);
    if (c % 2 == 1) term = {-term.re, -term.im};
    total = {total.re + term.re, total.im + term.im};
  }
  return total;
}

}  // namespace

TEST(Exhaustive, Examples) {
  const ChannelVector ch({1.0, j}, 10.0);
  for (const auto mode : {ExhaustiveMode::NormBall, ExhaustiveMode::CostPruned}) {
    const auto r = exhaustive_search(cost_matrix(ch), phi_bound(ch), Ring::Gaussian, mode);
    EXPECT_NEAR(r.f_min, 2.0, 1e-12);
    EXPECT_NEAR(oracle::grid_min_cost(cost_matrix(ch), phi_bound(ch), Ring::Gaussian), 2.0, 1e-12);
  }
  const CostMatrix scalar(ComplexMatrix::Constant(1, 1, 3.5));
  for (const Ring ring : {Ring::Gaussian, Ring::Eisenstein}) {
    const auto r = exhaustive_search(scalar, 4.0, ring);
    EXPECT_DOUBLE_EQ(r.f_min, 3.5);
    EXPECT_EQ(r.a_opt.norm_sq(), 1);
  }
}

TEST(Exhaustive, UnitBallIsUnitVectors) {
  std::mt19937_64 rng(51);
  const auto ch = oracle::random_vector_channel(rng, 3, 10.0);
  const auto m = cost_matrix(ch);
  const auto ball = exhaustive_search(m, 1.0, Ring::Gaussian);
  EXPECT_EQ(ball.candidates_checked, 12u);
  EXPECT_DOUBLE_EQ(ball.f_min, m.min_diagonal());
  const auto eis = exhaustive_search(m, 1.0, Ring::Eisenstein);
  EXPECT_EQ(eis.candidates_checked, 18u);
  EXPECT_THROW(exhaustive_search(m, 0.99, Ring::Gaussian), InvalidInput);
}

TEST(Exhaustive, ModesAgreeWithGrid) {
  std::mt19937_64 rng(52);
  std::uniform_real_distribution<double> snr(0.0, 12.0);
  for (const Ring ring : {Ring::Gaussian, Ring::Eisenstein}) {
    for (const std::size_t users : {1u, 2u, 3u}) {
      for (int t = 0; t < 6; ++t) {
        const auto ch = oracle::random_vector_channel(rng, users, std::pow(10.0, snr(rng) / 10));
        const double phi = std::min(phi_bound(ch), ring == Ring::Gaussian || users < 3 ? 5.0 : 2.5);
        const auto m = cost_matrix(ch);
        const auto ball = exhaustive_search(m, phi, ring, ExhaustiveMode::NormBall);
        const auto pruned = exhaustive_search(m, phi, ring, ExhaustiveMode::CostPruned);
        const double grid = oracle::grid_min_cost(m, phi, ring);
        EXPECT_DOUBLE_EQ(ball.f_min, pruned.f_min);
        EXPECT_TRUE(oracle::same_cost(ball.f_min, grid)) << to_string(ring) << " L=" << users;
        EXPECT_LE(ball.a_opt.norm_sq(), phi * phi + 1e-9);
        EXPECT_LE(pruned.candidates_checked, ball.candidates_checked);
      }
    }
  }
}

TEST(Clll, TrivialCases) {
  const CostMatrix scalar(ComplexMatrix::Constant(1, 1, 2.5));
  const auto r = clll_search(scalar);
  EXPECT_DOUBLE_EQ(r.f_min, 2.5);
  EXPECT_EQ(r.a_opt.norm_sq(), 1);

  ComplexMatrix diag = ComplexMatrix::Zero(3, 3);
  diag(0, 0) = 4.0;
  diag(1, 1) = 0.5;
  diag(2, 2) = 2.0;
  const auto d = clll_search(CostMatrix(diag));
  EXPECT_DOUBLE_EQ(d.f_min, 0.5);
  EXPECT_EQ(d.a_opt, CoefficientVector(std::vector<GaussianInt>{{0, 0}, {1, 0}, {0, 0}}) );
  EXPECT_THROW(clll_search(scalar, CLLLParams{0.4}), InvalidInput);
}

TEST(Clll, TransformIsUnimodularAndReproducesBasis) {
  std::mt19937_64 rng(53);
  for (int t = 0; t < 200; ++t) {
    const std::size_t users = 2 + static_cast<std::size_t>(t % 3);
    const auto ch = oracle::random_vector_channel(rng, users, 100.0);
    const auto m = cost_matrix(ch);
    const auto red = clll_reduce(m);
    ASSERT_EQ(red.transform.size(), users);
    std::vector<std::vector<GaussianInt>> u;
    ComplexMatrix u_num(static_cast<Eigen::Index>(users), static_cast<Eigen::Index>(users));
    for (std::size_t r = 0; r < users; ++r) {
      const auto row = red.transform[r].gaussian();
      u.emplace_back(row.begin(), row.end());
      EXPECT_FALSE(red.transform[r].is_zero());
      for (std::size_t c = 0; c < users; ++c) {
        u_num(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = row[c].value();
      }
    }
    EXPECT_EQ(det_exact(u).norm(), 1);
    // Reduced basis = U times the Cholesky rows, up to M = C C^H.
    const ComplexMatrix rebuilt = u_num * m.cholesky();
    EXPECT_LT((rebuilt - red.basis).norm(), 1e-8 * (1.0 + red.basis.norm()));
  }
}

TEST(Clll, DominatedByOptimumWithinBound) {
  std::mt19937_64 rng(54);
  int equal = 0;
  int total = 0;
  for (const std::size_t users : {2u, 3u, 4u}) {
    for (int t = 0; t < 150; ++t) {
      const auto ch = oracle::random_vector_channel(rng, users, std::pow(10.0, (t % 5) * 0.5));
      const auto m = cost_matrix(ch);
      const double f_opt = search_optimal(ch, Ring::Gaussian).f_min;
      const auto r = clll_search(m);
      EXPECT_GE(r.f_min, f_opt * (1 - 1e-9));
      EXPECT_LE(r.f_min, std::pow(2.0, static_cast<double>(users) - 1) * f_opt * (1 + 1e-9));
      EXPECT_NEAR(cost(r.a_opt, m), r.f_min, 1e-9 * r.f_min);
      equal += oracle::same_cost(r.f_min, f_opt) ? 1 : 0;
      ++total;
    }
  }
  EXPECT_GT(equal * 2, total);
}

TEST(Qes, Examples) {
  const auto direct = qes_search(ChannelVector({1.0}, 1.0), QesParams{0.5, 45.0, 2.0});
  EXPECT_EQ(direct.a_opt, CoefficientVector(std::vector<GaussianInt>{{1, 0}}));
  EXPECT_DOUBLE_EQ(direct.f_min, 1.0);

  const auto fine = qes_search(ChannelVector({1.0, j}, 10.0), QesParams{0.05, 1.0, 0.0});
  EXPECT_NEAR(fine.f_min, 2.0, 1e-12);

  EXPECT_THROW(qes_search(ChannelVector({1.0}, 1.0), QesParams{0.0, 5.0, 0.0}), InvalidInput);
  EXPECT_THROW(qes_search(ChannelVector({1.0}, 1.0), QesParams{0.1, 0.0, 0.0}), InvalidInput);
  EXPECT_THROW(qes_search(ChannelVector({1.0}, 1.0), QesParams{0.1, 91.0, 0.0}), InvalidInput);
}

TEST(Qes, DefaultMagnitudeCoversDiscontinuities) {
  const ChannelVector ch({0.5, Complex(0.0, 2.0)}, 4.0);
  EXPECT_NEAR(qes_default_mag_max(ch), (std::ceil(phi_bound(ch)) + 0.5) / 0.5, 1e-12);
  EXPECT_EQ(qes_default_mag_max(ChannelVector({0.0}, 1.0)), 0.0);
  const auto r = qes_search(ChannelVector({0.0, 0.0}, 1.0), QesParams{});
  EXPECT_EQ(r.a_opt.norm_sq(), 1);
}

TEST(Qes, DominatedByOptimum) {
  std::mt19937_64 rng(55);
  for (int t = 0; t < 200; ++t) {
    const auto ch = oracle::random_vector_channel(rng, 3, 10.0);
    const double f_opt = search_optimal(ch, Ring::Gaussian).f_min;
    const auto r = qes_search(ch, QesParams{0.2, 10.0, 0.0});
    EXPECT_GE(r.f_min, f_opt * (1 - 1e-9));
    EXPECT_NEAR(rate(ch, r.a_opt), r.rate, 1e-9 * std::max(1.0, r.rate));
  }
}

TEST(Qes, RefinementDoesNotHurtOnAverage) {
  std::mt19937_64 rng(56);
  double coarse = 0.0;
  double fine = 0.0;
  for (int t = 0; t < 500; ++t) {
    const auto ch = oracle::random_vector_channel(rng, 3, 10.0);
    coarse += qes_search(ch, QesParams{0.4, 20.0, 0.0}).f_min;
    fine += qes_search(ch, QesParams{0.2, 10.0, 0.0}).f_min;
  }
  EXPECT_LE(fine, coarse * (1 + 1e-12));
}
