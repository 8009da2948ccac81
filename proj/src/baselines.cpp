#include "cfsearch/baselines.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>

#include "candidate_tracker.hpp"
#include "cfsearch/errors.hpp"

namespace cfsearch {

namespace {

constexpr double kNormSlack = 1e-9;

// Calls visit(element) for every ring element within `radius` of `center`,
// in ascending lexicographic order of its integer coordinates.
template <typename Visit>
void for_each_in_disc(Complex center, double radius, GaussianInt*, Visit&& visit) {
  if (radius < 0.0) return;
  const double cr = center.real();
  const double ci = center.imag();
  const auto re_lo = static_cast<std::int64_t>(std::ceil(cr - radius));
  const auto re_hi = static_cast<std::int64_t>(std::floor(cr + radius));
  for (std::int64_t re = re_lo; re <= re_hi; ++re) {
    const double dx = static_cast<double>(re) - cr;
    const double w2 = radius * radius - dx * dx;
    if (w2 < 0.0) continue;
    const double w = std::sqrt(w2);
    const auto im_lo = static_cast<std::int64_t>(std::ceil(ci - w));
    const auto im_hi = static_cast<std::int64_t>(std::floor(ci + w));
    for (std::int64_t im = im_lo; im <= im_hi; ++im) visit(GaussianInt{re, im});
  }
}

template <typename Visit>
void for_each_in_disc(Complex center, double radius, EisensteinInt*, Visit&& visit) {
  if (radius < 0.0) return;
  const double cr = center.real();
  const double ci = center.imag();
  const double b_min = 2.0 * (ci - radius) / kSqrt3;
  const double b_max = 2.0 * (ci + radius) / kSqrt3;
  const auto a_lo = static_cast<std::int64_t>(std::floor(cr + 0.5 * b_min - radius));
  const auto a_hi = static_cast<std::int64_t>(std::ceil(cr + 0.5 * b_max + radius));
  const double r2 = radius * radius;
  for (std::int64_t a = a_lo; a <= a_hi; ++a) {
    // |a + b w - c|^2 = b^2 - b (u + sqrt3 ci) + u^2 + ci^2 with u = a - cr.
    const double u = static_cast<double>(a) - cr;
    const double mid = 0.5 * (u + kSqrt3 * ci);
    const double disc = mid * mid - u * u - ci * ci + r2;
    if (disc < 0.0) continue;
    const double w = std::sqrt(disc);
    const auto b_lo = static_cast<std::int64_t>(std::floor(mid - w));
    const auto b_hi = static_cast<std::int64_t>(std::ceil(mid + w));
    for (std::int64_t b = b_lo; b <= b_hi; ++b) {
      const EisensteinInt e{a, b};
      if (std::norm(e.value() - center) <= r2) visit(e);
    }
  }
}

template <typename Element>
class NormBallSearch {
 public:
  NormBallSearch(const CostMatrix& m, double phi)
      : tracker_(m, m.size()), limit_(phi * phi + kNormSlack) {}

  void run() { descend(0, 0); }
  detail::CandidateTracker<Element>& tracker() { return tracker_; }

 private:
  void descend(std::size_t index, std::int64_t used) {
    auto a = tracker_.scratch();
    if (index == a.size()) {
      tracker_.offer_scratch();
      return;
    }
    const double remaining = limit_ - static_cast<double>(used);
    for_each_in_disc(Complex{}, std::sqrt(std::max(remaining, 0.0)),
                     static_cast<Element*>(nullptr), [&](Element e) {
                       const std::int64_t n = e.norm();
                       if (static_cast<double>(used + n) > limit_) return;
                       a[index] = e;
                       descend(index + 1, used + n);
                     });
    a[index] = Element{};
  }

  detail::CandidateTracker<Element> tracker_;
  double limit_;
};

// Depth-first search over a C (C lower triangular, M = C C^H) from the last
// component down, bounding sum_{i >= j} |(aC)_i|^2 by the best f so far.
template <typename Element>
class CostPrunedSearch {
 public:
  CostPrunedSearch(const CostMatrix& m, double phi)
      : chol_(m.cholesky()),
        tracker_(m, m.size()),
        norm_limit_(phi * phi + kNormSlack),
        levels_(m.size()) {
    // Every unit vector fits in the ball (phi >= 1), so min diag M is an
    // upper bound on the optimum.
    radius_sq_ = m.min_diagonal() * (1.0 + 1e-9);
  }

  void run() {
    const std::size_t n = tracker_.scratch().size();
    descend(n, 0.0, 0);
  }
  detail::CandidateTracker<Element>& tracker() { return tracker_; }

 private:
  struct Option {
    Element element;
    double partial;
  };

  // Components [j, n) are fixed; choose component j - 1.
  void descend(std::size_t j, double partial, std::int64_t used) {
    auto a = tracker_.scratch();
    if (j == 0) {
      if (tracker_.offer_scratch()) {
        radius_sq_ = std::min(radius_sq_, tracker_.best_f() * (1.0 + 1e-10));
      }
      return;
    }
    const std::size_t col = j - 1;
    const auto c = static_cast<Eigen::Index>(col);
    Complex shift{0.0, 0.0};
    for (std::size_t i = j; i < a.size(); ++i) {
      shift += a[i].value() * chol_(static_cast<Eigen::Index>(i), c);
    }
    const double diag = chol_(c, c).real();
    const Complex center = -shift / diag;
    const double budget = radius_sq_ - partial;
    if (budget < 0.0) return;

    auto& options = levels_[col];
    options.clear();
    for_each_in_disc(center, std::sqrt(budget) / diag, static_cast<Element*>(nullptr),
                     [&](Element e) {
                       if (static_cast<double>(used + e.norm()) > norm_limit_) return;
                       const double y = std::norm(e.value() * diag + shift);
                       options.push_back({e, partial + y});
                     });
    std::stable_sort(options.begin(), options.end(),
                     [](const Option& x, const Option& y) { return x.partial < y.partial; });
    // descend() below reuses deeper levels only, so iterating by index is safe.
    for (std::size_t k = 0; k < levels_[col].size(); ++k) {
      const Option opt = levels_[col][k];
      if (opt.partial > radius_sq_) break;
      a[col] = opt.element;
      descend(col, opt.partial, used + opt.element.norm());
    }
    a[col] = Element{};
  }

  const ComplexMatrix& chol_;
  detail::CandidateTracker<Element> tracker_;
  double norm_limit_;
  double radius_sq_;
  std::vector<std::vector<Option>> levels_;
};

template <typename Element>
SearchResult run_exhaustive(const CostMatrix& m, double phi, ExhaustiveMode mode) {
  const auto start = std::chrono::steady_clock::now();
  SearchResult result;
  auto finish = [&](detail::CandidateTracker<Element>& tracker) {
    result.a_opt = tracker.best();
    result.f_min = tracker.best_f();
    result.candidates_checked = tracker.checked();
  };
  if (mode == ExhaustiveMode::NormBall) {
    NormBallSearch<Element> search(m, phi);
    search.run();
    finish(search.tracker());
  } else {
    CostPrunedSearch<Element> search(m, phi);
    search.run();
    finish(search.tracker());
  }
  result.rate = log2_plus(1.0 / result.f_min);
  result.elapsed = std::chrono::steady_clock::now() - start;
  return result;
}

GaussianInt round_gaussian(Complex z) { return detail::quantize_gaussian_unchecked(z); }

}  // namespace

SearchResult exhaustive_search(const CostMatrix& m, double phi, Ring ring, ExhaustiveMode mode) {
  if (!std::isfinite(phi) || phi < 1.0) {
    throw InvalidInput("exhaustive search needs phi >= 1 (otherwise the search space is empty)");
  }
  if (ring == Ring::Gaussian) return run_exhaustive<GaussianInt>(m, phi, mode);
  return run_exhaustive<EisensteinInt>(m, phi, mode);
}

CLLLReduction clll_reduce(const CostMatrix& m, const CLLLParams& params) {
  if (!(params.delta > 0.5 && params.delta <= 1.0)) {
    throw InvalidInput("CLLL delta must lie in (1/2, 1]");
  }
  const auto n = static_cast<Eigen::Index>(m.size());
  ComplexMatrix basis = m.cholesky();
  ComplexMatrix transform = ComplexMatrix::Identity(n, n);

  ComplexMatrix mu = ComplexMatrix::Zero(n, n);
  Eigen::VectorXd bstar_sq(n);
  auto gram_schmidt = [&] {
    ComplexMatrix bstar = basis;
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < i; ++j) {
        // <b_i, b*_j> with <x, y> = x y^H
        mu(i, j) = basis.row(i).dot(bstar.row(j)) / bstar_sq(j);
        mu(i, j) = std::conj(mu(i, j));
        bstar.row(i) -= mu(i, j) * bstar.row(j);
      }
      bstar_sq(i) = bstar.row(i).squaredNorm();
      if (!(bstar_sq(i) > 0.0)) throw NumericError("CLLL: basis became degenerate");
    }
  };
  gram_schmidt();

  CLLLReduction out;
  const std::size_t max_swaps = 100000;
  Eigen::Index k = 1;
  while (k < n) {
    for (Eigen::Index j = k - 1; j >= 0; --j) {
      const GaussianInt q = round_gaussian(mu(k, j));
      if (q.is_zero()) continue;
      const Complex qv = q.value();
      basis.row(k) -= qv * basis.row(j);
      transform.row(k) -= qv * transform.row(j);
      for (Eigen::Index i = 0; i < j; ++i) mu(k, i) -= qv * mu(j, i);
      mu(k, j) -= qv;
    }
    const double lovasz = (params.delta - std::norm(mu(k, k - 1))) * bstar_sq(k - 1);
    if (bstar_sq(k) >= lovasz) {
      ++k;
      continue;
    }
    basis.row(k).swap(basis.row(k - 1));
    transform.row(k).swap(transform.row(k - 1));
    gram_schmidt();
    k = std::max<Eigen::Index>(k - 1, 1);
    if (++out.swaps > max_swaps) throw NumericError("CLLL did not converge");
  }

  for (Eigen::Index i = 0; i < n; ++i) {
    std::vector<GaussianInt> row(static_cast<std::size_t>(n));
    for (Eigen::Index j = 0; j < n; ++j) row[static_cast<std::size_t>(j)] = round_gaussian(transform(i, j));
    out.transform.emplace_back(std::move(row));
  }
  out.basis = std::move(basis);
  return out;
}

SearchResult clll_search(const CostMatrix& m, const CLLLParams& params) {
  const auto start = std::chrono::steady_clock::now();
  const auto reduction = clll_reduce(m, params);
  SearchResult result;
  result.f_min = std::numeric_limits<double>::infinity();
  std::vector<Complex> values(m.size());
  for (const auto& row : reduction.transform) {
    row.values_into(values);
    const double f = m.quadratic_form(values);
    if (f < result.f_min) {
      result.f_min = f;
      result.a_opt = row;
    }
  }
  result.candidates_checked = reduction.transform.size();
  result.rate = log2_plus(1.0 / result.f_min);
  result.elapsed = std::chrono::steady_clock::now() - start;
  return result;
}

double qes_default_mag_max(const ChannelVector& ch) {
  double smallest = std::numeric_limits<double>::infinity();
  for (const auto& h : ch.gains()) {
    if (h != Complex{}) smallest = std::min(smallest, std::abs(h));
  }
  if (!std::isfinite(smallest)) return 0.0;
  return (std::ceil(phi_bound(ch)) + 0.5) / smallest;
}

SearchResult qes_search(const ChannelVector& ch, const QesParams& params) {
  if (!(params.mag_step > 0.0) || !(params.phase_step_deg > 0.0) ||
      !std::isfinite(params.mag_step) || !std::isfinite(params.phase_step_deg)) {
    throw InvalidInput("QES steps must be positive");
  }
  if (params.phase_step_deg > 90.0) throw InvalidInput("QES phase step must be <= 90 degrees");
  const auto start = std::chrono::steady_clock::now();
  const CostMatrix m = cost_matrix(ch);
  const double mag_max = params.mag_max > 0.0 ? params.mag_max : qes_default_mag_max(ch);
  const auto gains = ch.gains();

  const auto mag_count = static_cast<std::int64_t>(std::floor(mag_max / params.mag_step + 1e-9));
  std::vector<Complex> rotations;
  for (std::int64_t t = 0; static_cast<double>(t) * params.phase_step_deg < 90.0 - 1e-9; ++t) {
    rotations.push_back(std::polar(1.0, static_cast<double>(t) * params.phase_step_deg *
                                            std::numbers::pi / 180.0));
  }

  detail::CandidateTracker<GaussianInt> tracker(m, gains.size());
  auto a = tracker.scratch();
  for (std::int64_t s = 1; s <= mag_count; ++s) {
    const double magnitude = static_cast<double>(s) * params.mag_step;
    for (const auto& rot : rotations) {
      const Complex alpha = magnitude * rot;
      for (std::size_t l = 0; l < gains.size(); ++l) {
        a[l] = detail::quantize_gaussian_unchecked(alpha * gains[l]);
      }
      tracker.offer_scratch();
    }
  }
  if (!tracker.has_best()) tracker.offer_unit_vectors();

  SearchResult result;
  result.a_opt = tracker.best();
  result.f_min = tracker.best_f();
  result.rate = rate_from_cost(ch, result.f_min);
  result.candidates_checked = tracker.checked();
  result.elapsed = std::chrono::steady_clock::now() - start;
  return result;
}

}  // namespace cfsearch
