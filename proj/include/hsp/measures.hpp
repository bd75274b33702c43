#pragma once

#include <limits>
#include <vector>

#include "hsp/curve.hpp"
#include "hsp/pencil.hpp"

namespace hsp {

/// Probability measure with mass 1/count at each atom (roots with
/// multiplicity appear as repeated atoms).
struct RootMeasure {
  std::vector<cxd> atoms;

  double weight() const { return 1.0 / double(atoms.size()); }
};

/// Atoms = roots of p with multiplicity, mass 1/deg each.
RootMeasure root_measure(const ComplexPolynomial& p, const PrecisionPolicy& policy = {});

/// (1/count) sum 1/(z - atom). Throws AtomCollision when z is within
/// 1e-13 x scale of an atom.
cxd cauchy_transform(const RootMeasure& mu, cxd z);

/// (1/count) sum log|z - atom|, same collision guard.
double log_potential(const RootMeasure& mu, cxd z);

/// Max over `samples` points on |z| = radius of |L_{n,j}(z) - gamma_j(z)|,
/// where L_{n,j} = p'/(lambda p) for the family-j eigenpolynomial of degree n
/// and gamma_j is the curve branch with z gamma_j -> xi_j (matched by the
/// branch expansion at infinity). Requires radius beyond every branch point.
double branch_deviation(const Pencil& P, int j, int n, double radius, int samples,
                        const PrecisionPolicy& policy = {});

struct PotentialOrderingReport {
  /// Max over polynomials and grid points of u' - u - slack (slack = 5/deg);
  /// nonpositive means the ordering u' <= u holds within slack everywhere.
  double max_violation = -std::numeric_limits<double>::infinity();
  /// Max |u - u'| over grid points outside the root hull inflated by 20%.
  double max_outer_gap = 0;
  int outer_points = 0;
};

/// Compares logarithmic potentials of the root measures of each p and its
/// derivative over the grid. Grid points colliding with atoms are skipped.
PotentialOrderingReport potential_ordering_check(
    const std::vector<ComplexPolynomial>& p_list, const std::vector<cxd>& grid,
    const PrecisionPolicy& policy = {});

}  // namespace hsp
