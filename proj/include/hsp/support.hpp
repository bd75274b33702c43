#pragma once

#include <array>
#include <utility>
#include <vector>

#include "hsp/curve.hpp"
#include "hsp/measures.hpp"
#include "hsp/pencil.hpp"

namespace hsp {

struct Rect {
  double x0 = 0, y0 = 0, x1 = 0, y1 = 0;
};

/// Zero set of Im[(A_i - A_l) conj(A_j - A_l)] on a grid, i.e. the points
/// where three scaled branches are collinear in C.
struct GammaLocus {
  std::array<int, 3> triple{};
  std::vector<cxd> points;
  double res = 0;
};

/// Circle data for the closed-form locus of the three-branch curve
/// prod_i ((b_i - z) w - 1): the quadric -A(u^2+v^2) + Bu u + Bv v + C = 0.
struct Example3Circle {
  cxd center{};
  double radius = 0;
  double A = 0, Bu = 0, Bv = 0, C = 0;
};

/// Traced zero-level curve of H_i - H_j (H relative to the seed), with the
/// predicted measure density |A_i - A_j|/(2 pi) at each vertex.
struct LevelCurve {
  std::vector<cxd> points;
  std::pair<int, int> pair{};
  cxd base{};
  std::vector<double> density;
  std::vector<cxd> gvals;  // A_i - A_j at each vertex
};

struct DensityReport {
  std::vector<double> ratios;  // empirical / predicted density per usable vertex
  double mean = 0;
  double spread = 0;  // standard deviation of the ratios
  int skipped = 0;    // vertices whose window held fewer than 3 atoms
};

/// A_b(z) = alpha_{j_family} * w_b(z) for each curve branch b, labeled by
/// continuation from a fixed large-|z| anchor on the positive real axis.
std::vector<cxd> scaled_branches(const Pencil& P, int j_family, cxd z,
                                 const PrecisionPolicy& policy = {});

/// Marching-squares zero set of the collinearity function for the labeled
/// branch triple over the grid, with per-edge bisection refinement to res/10.
/// Throws BranchCollision when a branch point lies inside the rectangle.
GammaLocus gamma_locus(const Pencil& P, int j_family, std::array<int, 3> triple,
                       Rect rect, double res, const PrecisionPolicy& policy = {});

/// Closed-form circle through the alternating-sum (eta) coefficients for the
/// three-branch curve with poles b1, b2, b3. Throws CollinearB for collinear b.
Example3Circle example3_circle(cxd b1, cxd b2, cxd b3);

/// Re of the contour integral of A_i - A_j along the straight segment
/// base -> z, with continuation-tracked branch labels and adaptive
/// Gauss-Kronrod quadrature (error target 1e-9).
double h_difference(const Pencil& P, int j_family, std::pair<int, int> pair, cxd base,
                    cxd z, const PrecisionPolicy& policy = {});

/// Predictor-corrector tracing of the level set of H_i - H_j through the
/// seed: predictor along i*conj(A_i - A_j), corrector by 1D Newton along the
/// gradient. Terminates at branch points, max_len arclength, or the working
/// bounding box; throws LostTrack when the corrector diverges.
LevelCurve trace_level_curve(const Pencil& P, int j_family, std::pair<int, int> pair,
                             cxd seed, double step, double max_len,
                             const PrecisionPolicy& policy = {});

/// Per-vertex comparison of the empirical linear root density (atoms binned
/// by arclength window along the curve) against the recorded |A_i - A_j|/2pi.
/// Windows with fewer than 3 atoms are skipped; SparseWindow is thrown only
/// when every window is sparse.
DensityReport density_vs_roots(const LevelCurve& level, const RootMeasure& mu,
                               double window);

}  // namespace hsp
