#pragma once

#include <array>
#include <vector>

#include "cfsearch/cf_model.hpp"
#include "cfsearch/ring.hpp"

namespace cfsearch {

// Boundary points between neighbouring quantization cells of a ring,
// restricted to a disc around the origin.
struct DiscontinuitySet {
  std::vector<Complex> points;
  Ring ring = Ring::Gaussian;
  double bound = 0.0;  // ceil(phi) + 1/2 (Gaussian) or ceil(phi) + 3/4 (Eisenstein)
};

// Symmetry reduction applied to the discontinuity points before they are
// turned into scaling values. Quadrant keeps arg in [0, 90) degrees and is
// only meaningful over Z[j]; Sextant keeps arg in [0, 60) over Z[w].
enum class SectorReduction { None, Quadrant, Sextant };

// Quadrant for Gaussian, None for Eisenstein.
SectorReduction default_reduction(Ring ring);

// Points c + dj with c in Z, d in 1/2 + Z; e + fj with e in 1/2 + Z, f in Z;
// o + pj with o, p in 1/2 + Z; all with modulus <= ceil(phi) + 1/2.
// Sorted by real part, then imaginary part.
DiscontinuitySet gen_disc_gaussian(double phi);

// Midpoints between neighbouring Eisenstein integers with modulus
// <= ceil(phi) + 3/4. Sorted by real part, then imaginary part.
DiscontinuitySet gen_disc_eisenstein(double phi);

DiscontinuitySet gen_disc(double phi, Ring ring);

// Corners of the hexagonal Eisenstein cells, where three cells meet. The
// midpoints alone miss optima whose scaling region touches no edge midpoint,
// so the Eisenstein searches visit these as well.
struct CellCorner {
  Complex point;
  std::array<EisensteinInt, 3> nearest;
};

// Corners with modulus <= ceil(phi) + 3/4, sorted by real part, then imaginary part.
std::vector<CellCorner> gen_cell_corners_eisenstein(double phi);

struct AlphaSet {
  std::vector<Complex> alphas;
  // Set when every gain is zero; only unit vectors remain as candidates.
  bool unit_vectors_only = false;
};

// Keeps the points of psi inside the requested sector.
std::vector<Complex> reduce_sector(const std::vector<Complex>& points, SectorReduction reduction);

// {phi / h_l : phi in psi (after sector reduction), h_l != 0}
AlphaSet gen_alpha_set(const DiscontinuitySet& psi, const ChannelVector& ch,
                       SectorReduction reduction);

// Exact minimizer of a M a^H over nonzero ring vectors for a single-antenna
// relay: quantize alpha*h for every discontinuity alpha, then try the unit
// vectors.
SearchResult search_optimal(const ChannelVector& ch, Ring ring, SectorReduction reduction);
SearchResult search_optimal(const ChannelVector& ch, Ring ring);

}  // namespace cfsearch
