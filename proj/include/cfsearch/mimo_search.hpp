#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "cfsearch/cf_model.hpp"
#include "cfsearch/optimal_search.hpp"
#include "cfsearch/ring.hpp"

namespace cfsearch {

// k column indices (0-based, strictly increasing) selecting H_tau.
struct SubsetIndex {
  std::vector<std::size_t> columns;
  friend bool operator==(const SubsetIndex&, const SubsetIndex&) = default;
};

// All C(L, k) subsets in lexicographic order. Throws InvalidInput unless
// 1 <= k <= L.
std::vector<SubsetIndex> enumerate_subsets(std::size_t users, std::size_t k);

// |det H_tau| below this fraction of (max |H_mn|)^k marks the subset singular.
inline constexpr double kSingularThreshold = 1e-10;

// Streams a = [c H_tau^-1 H]_R for every c in psi^k (lexicographic over psi
// indices). Returns the number of tuples visited, or -1 when H_tau is
// singular and the subset was skipped.
std::int64_t vertex_candidates(const ChannelMatrix& ch, const SubsetIndex& tau,
                               const DiscontinuitySet& psi,
                               const std::function<void(const CoefficientVector&)>& visit);

struct MimoSearchResult : SearchResult {
  std::size_t subsets_used = 0;
  std::size_t subsets_singular = 0;
};

// Exact minimizer of a M a^H with M = mimo_gram(ch): vertex candidates over
// every full-rank column subset, then the unit vectors.
MimoSearchResult search_optimal_mimo(const ChannelMatrix& ch, Ring ring);

}  // namespace cfsearch
