#pragma once

#include <utility>
#include <vector>

#include "k3e/common.hpp"

namespace k3e {

// Roots (with multiplicity, i.e. repeated entries) of a polynomial given by
// ascending coefficients c[0] + c[1] x + ... + c[n] x^n.  The caller must
// pass a nonzero leading coefficient; exact zeros at the low end are split
// off analytically before the iteration starts.  Uses the Aberth-Ehrlich
// simultaneous iteration.
std::vector<Complex> polynomial_roots(const std::vector<Complex>& coeffs);

// Group nearby points: every point within `radius` of a cluster's running
// centroid joins that cluster.  Returns (centroid, count) pairs sorted by
// (Re, Im) of the centroid.
std::vector<std::pair<Complex, int>> cluster_points(const std::vector<Complex>& points,
                                                    double radius);

}  // namespace k3e
