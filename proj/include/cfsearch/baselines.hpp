#pragma once

#include <vector>

#include "cfsearch/cf_model.hpp"
#include "cfsearch/ring.hpp"

namespace cfsearch {

enum class ExhaustiveMode {
  // Every nonzero ring vector with ||a|| <= phi, components in lexicographic
  // order, pruned only by the running norm. Cost grows like phi^(2L).
  NormBall,
  // Same search space, additionally pruned by a lower bound on f taken from
  // the Cholesky factor of M (Fincke-Pohst style). Returns the same minimum.
  CostPruned,
};

// The M-only searches below report rate = log2+(1 / f_min), which is the
// rate when M is a normalized Gram such as mimo_gram (up to the 1/2 MIMO
// factor). For cost_matrix use rate_from_cost.

// Exact minimizer of a M a^H over nonzero ring vectors with ||a|| <= phi.
// Throws InvalidInput when phi < 1 (no ring vector fits).
SearchResult exhaustive_search(const CostMatrix& m, double phi, Ring ring,
                               ExhaustiveMode mode = ExhaustiveMode::NormBall);

struct CLLLParams {
  double delta = 0.99;  // Lovasz parameter, 1/2 < delta <= 1
};

struct CLLLReduction {
  // Rows of the unimodular transform; row i gives the coefficients of the
  // i-th reduced basis vector.
  std::vector<CoefficientVector> transform;
  ComplexMatrix basis;  // reduced basis, one vector per row
  std::size_t swaps = 0;
};

// Complex LLL on the rows of the Cholesky factor of M.
CLLLReduction clll_reduce(const CostMatrix& m, const CLLLParams& params = {});

// Shortest row of the CLLL-reduced basis, as coefficients over Z[j].
SearchResult clll_search(const CostMatrix& m, const CLLLParams& params = {});

struct QesParams {
  double mag_step = 0.1;
  double phase_step_deg = 5.0;
  // Largest |alpha| swept; <= 0 selects (ceil(phi) + 1/2) / min |h_l|.
  double mag_max = 0.0;
};

// Default |alpha|_max covering every single-antenna discontinuity.
double qes_default_mag_max(const ChannelVector& ch);

// Grid sweep over |alpha| in (0, mag_max] and arg(alpha) in [0, 90) degrees,
// a = [alpha h] over Z[j]. Falls back to unit vectors when no sweep point
// yields a nonzero vector.
SearchResult qes_search(const ChannelVector& ch, const QesParams& params);

}  // namespace cfsearch
