#include "cfsearch/mimo_search.hpp"

#include <chrono>
#include <cmath>
#include <algorithm>
#include <limits>
#include <optional>

#include "candidate_tracker.hpp"
#include "cfsearch/errors.hpp"

namespace cfsearch {

namespace {

// G = H_tau^-1 H, or nullopt when H_tau is numerically singular.
std::optional<ComplexMatrix> subset_projection(const ComplexMatrix& h, const SubsetIndex& tau) {
  const auto k = h.rows();
  ComplexMatrix sub(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    sub.col(i) = h.col(static_cast<Eigen::Index>(tau.columns[static_cast<std::size_t>(i)]));
  }
  const double scale = h.cwiseAbs().maxCoeff();
  if (!(scale > 0.0)) return std::nullopt;
  Eigen::PartialPivLU<ComplexMatrix> lu(sub);
  const double det = std::abs(lu.determinant());
  if (!(det >= kSingularThreshold * std::pow(scale, static_cast<double>(k)))) return std::nullopt;
  return lu.solve(h);
}

// Walks k-tuples c of psi points in lexicographic index order, writing
// a = [c G]_R into `a` before each visit. Components on tau are the quantized
// tuple entries themselves.
//
// With a finite threshold, tuples whose fixed components alone already force
// f(a) >= lambda_min * ||a_tau||^2 above threshold() are skipped. Such a
// candidate can never become the running minimum, so the search outcome is
// unchanged.
template <typename Element>
class VertexWalker {
 public:
  VertexWalker(const ComplexMatrix& g, const SubsetIndex& tau, const std::vector<Complex>& points,
               std::span<Element> a)
      : g_(g), tau_(tau), points_(points), a_(a), k_(static_cast<std::size_t>(g.rows())) {
    on_boundary_.resize(points.size());
    norms_.resize(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
      on_boundary_[i] = detail::RingOps<Element>::quantize(points[i]);
      norms_[i] = static_cast<double>(on_boundary_[i].norm());
    }
    for (std::size_t n = 0; n < a.size(); ++n) {
      if (std::find(tau.columns.begin(), tau.columns.end(), n) == tau.columns.end()) {
        free_cols_.push_back(n);
      }
    }
    partial_.assign(k_ + 1, std::vector<Complex>(free_cols_.size()));
  }

  template <typename Threshold, typename Visit>
  std::int64_t run(double lambda_min, Threshold&& threshold, Visit&& visit) {
    visited_ = 0;
    if (points_.empty()) return 0;
    lambda_min_ = lambda_min;
    refresh(threshold());
    const std::vector<std::size_t> outer = active_;
    for (const std::size_t i : outer) {
      const double limit = threshold();
      if (limit < active_limit_) refresh(limit);
      if (lambda_min_ * norms_[i] > limit) continue;
      place(0, i);
      descend(1, norms_[i], threshold, visit);
    }
    return visited_;
  }

 private:
  void refresh(double limit) {
    active_limit_ = limit;
    active_.clear();
    for (std::size_t i = 0; i < points_.size(); ++i) {
      if (lambda_min_ * norms_[i] <= limit) active_.push_back(i);
    }
  }

  void place(std::size_t t, std::size_t i) {
    const Complex c = points_[i];
    for (std::size_t f = 0; f < free_cols_.size(); ++f) {
      partial_[t + 1][f] = partial_[t][f] + c * g_(static_cast<Eigen::Index>(t),
                                                  static_cast<Eigen::Index>(free_cols_[f]));
    }
    a_[tau_.columns[t]] = on_boundary_[i];
  }

  template <typename Threshold, typename Visit>
  void descend(std::size_t t, double used, Threshold& threshold, Visit& visit) {
    if (t == k_) {
      for (std::size_t f = 0; f < free_cols_.size(); ++f) {
        a_[free_cols_[f]] = detail::RingOps<Element>::quantize(partial_[k_][f]);
      }
      visit();
      ++visited_;
      return;
    }
    for (std::size_t pos = 0; pos < active_.size(); ++pos) {
      const std::size_t i = active_[pos];
      if (lambda_min_ * (used + norms_[i]) > threshold()) continue;
      place(t, i);
      descend(t + 1, used + norms_[i], threshold, visit);
    }
  }

  const ComplexMatrix& g_;
  const SubsetIndex& tau_;
  const std::vector<Complex>& points_;
  std::span<Element> a_;
  std::size_t k_;
  std::vector<Element> on_boundary_;
  std::vector<double> norms_;
  std::vector<std::size_t> free_cols_;
  std::vector<std::vector<Complex>> partial_;
  std::vector<std::size_t> active_;
  double active_limit_ = 0.0;
  double lambda_min_ = 0.0;
  std::int64_t visited_ = 0;
};

template <typename Element>
MimoSearchResult run_mimo(const ChannelMatrix& ch, Ring ring) {
  const auto start = std::chrono::steady_clock::now();
  const CostMatrix m = mimo_gram(ch);
  auto points = gen_disc(mimo_phi(ch), ring).points;
  if (ring == Ring::Eisenstein) {
    for (const auto& corner : gen_cell_corners_eisenstein(mimo_phi(ch))) {
      points.push_back(corner.point);
    }
  }
  const auto& h = ch.gains();

  // Skip bound: f(a) >= lambda_min(M) ||a||^2, and no candidate above the
  // best unit vector can be the final answer.
  const double lambda_min =
      Eigen::SelfAdjointEigenSolver<ComplexMatrix>(m.matrix(), Eigen::EigenvaluesOnly)
          .eigenvalues()
          .minCoeff() *
      (1.0 - 1e-9);
  const double unit_best = m.min_diagonal();

  MimoSearchResult result;
  detail::CandidateTracker<Element> tracker(m, ch.users());
  auto a = tracker.scratch();
  auto threshold = [&] { return std::min(tracker.best_f(), unit_best) * (1.0 + 1e-9); };
  for (const auto& tau : enumerate_subsets(ch.users(), ch.antennas())) {
    const auto g = subset_projection(h, tau);
    if (!g) {
      ++result.subsets_singular;
      continue;
    }
    ++result.subsets_used;
    VertexWalker<Element> walker(*g, tau, points, a);
    walker.run(lambda_min, threshold, [&] { tracker.offer_scratch(); });
  }
  tracker.offer_unit_vectors();

  result.a_opt = tracker.best();
  result.f_min = tracker.best_f();
  result.rate = 0.5 * log2_plus(1.0 / result.f_min);
  result.candidates_checked = tracker.checked();
  result.elapsed = std::chrono::steady_clock::now() - start;
  return result;
}

template <typename Element>
std::int64_t stream_vertices(const ChannelMatrix& ch, const SubsetIndex& tau,
                             const DiscontinuitySet& psi,
                             const std::function<void(const CoefficientVector&)>& visit) {
  const auto g = subset_projection(ch.gains(), tau);
  if (!g) return -1;
  std::vector<Element> a(ch.users());
  VertexWalker<Element> walker(*g, tau, psi.points, std::span<Element>(a));
  const auto unbounded = [] { return std::numeric_limits<double>::infinity(); };
  return walker.run(0.0, unbounded, [&] { visit(CoefficientVector(a)); });
}

void check_subset(const ChannelMatrix& ch, const SubsetIndex& tau) {
  if (tau.columns.size() != ch.antennas()) throw InvalidInput("subset size must equal k");
  for (std::size_t i = 0; i < tau.columns.size(); ++i) {
    if (tau.columns[i] >= ch.users() || (i > 0 && tau.columns[i] <= tau.columns[i - 1])) {
      throw InvalidInput("subset indices must be strictly increasing and < L");
    }
  }
}

}  // namespace

std::vector<SubsetIndex> enumerate_subsets(std::size_t users, std::size_t k) {
  if (k < 1 || k > users) throw InvalidInput("enumerate_subsets needs 1 <= k <= L");
  std::vector<SubsetIndex> out;
  std::vector<std::size_t> cols(k);
  for (std::size_t i = 0; i < k; ++i) cols[i] = i;
  while (true) {
    out.push_back({cols});
    std::size_t i = k;
    while (i > 0 && cols[i - 1] == users - k + (i - 1)) --i;
    if (i == 0) break;
    ++cols[i - 1];
    for (std::size_t j = i; j < k; ++j) cols[j] = cols[j - 1] + 1;
  }
  return out;
}

std::int64_t vertex_candidates(const ChannelMatrix& ch, const SubsetIndex& tau,
                               const DiscontinuitySet& psi,
                               const std::function<void(const CoefficientVector&)>& visit) {
  check_subset(ch, tau);
  if (psi.ring == Ring::Gaussian) return stream_vertices<GaussianInt>(ch, tau, psi, visit);
  return stream_vertices<EisensteinInt>(ch, tau, psi, visit);
}

MimoSearchResult search_optimal_mimo(const ChannelMatrix& ch, Ring ring) {
  if (ring == Ring::Gaussian) return run_mimo<GaussianInt>(ch, ring);
  return run_mimo<EisensteinInt>(ch, ring);
}

}  // namespace cfsearch
