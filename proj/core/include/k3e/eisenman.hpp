#pragma once

#include <array>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "k3e/binary_form.hpp"
#include "k3e/common.hpp"
#include "k3e/fibration.hpp"

namespace k3e {

// Reference Hermitian metric on the target.  'euclidean' is the flat metric
// on C^n; 'fiber_fs' acts on (x, y, t) charts of a fibered surface as the
// Fubini-Study metric of [x : y : 1] crossed with the chordal metric of the
// base chart.  Both may carry an overall scale factor.
struct MetricSpec {
  enum class Kind { euclidean, fiber_fs };
  Kind kind = Kind::euclidean;
  double scale = 1.0;
};

using TargetPoint = std::vector<Complex>;
using Tangent = std::vector<Complex>;

// Hermitian pairing of tangents at a point; the p-vector norm is the square
// root of the Gram determinant.
Complex metric_pairing(const MetricSpec& m, const TargetPoint& at, const Tangent& v,
                       const Tangent& w);
double pvector_norm(const MetricSpec& m, const TargetPoint& at,
                    const std::vector<Tangent>& vs);

// A holomorphic map from the unit polydisk D^p (p = 1 or 2) into a chart of
// the target, with the data needed to turn it into an Eisenman upper bound:
// where it is centered, which reference metric measures its image, and
// finite-difference steps matched to its internal scale.
struct TestMap {
  int p = 1;
  MetricSpec metric;
  std::function<TargetPoint(const std::array<Complex, 2>&)> eval;
  TargetPoint basepoint_image;
  double safety_radius = 1.0;  // certified fraction of the closed polydisk
  std::array<double, 2> fd_step = {1e-6, 1e-6};
  std::string description;

  TargetPoint operator()(Complex u, Complex v = 0.0) const { return eval({u, v}); }

  // Max Cauchy-Riemann residual |df/d(conj u)| / (1 + |df/du|) over the map's
  // parameters and target coordinates, by finite differences at `at`.
  double holomorphy_residual(const std::array<Complex, 2>& at) const;

  // Columns of the differential at `at` (one tangent per parameter).
  std::vector<Tangent> jacobian_columns(const std::array<Complex, 2>& at) const;
};

struct BoundResult {
  double bound;                  // the certified upper bound 1/|mu|
  double mu_abs;                 // |mu| in the reference metric
  double collinearity_residual;  // how far the pushed p-vector is from span(zeta)
};

// The certified upper bound at (basepoint, zeta): the map pushes the
// coordinate p-vector of the polydisk to mu * zeta; any such map bounds the
// Eisenman p-pseudovolume by 1/|mu|.  zeta must be decomposable, given by p
// tangent vectors of unit p-norm; the pushforward must be collinear with it.
BoundResult upper_bound(const TestMap& m, const std::vector<Tangent>& zeta);

// Normalize p tangent vectors so their wedge has unit norm.
std::vector<Tangent> normalize_pvector(const MetricSpec& m, const TargetPoint& at,
                                       std::vector<Tangent> vs);

// (u, v) -> F(z0 + R u, t0 + r v) on a Weierstrass fibration, with r chosen
// as 0.9 of the distance from t0 to the singular locus so the t-disk stays
// compactly inside the regular locus; the z-direction is unconstrained.
// Target coordinates are (x, y, t-chart) with the fiber_fs metric.
TestMap k3_test_map(const WeierstrassFibration& x, Complex z0, const P1Point& t0,
                    double big_r);

struct VanishingCertificate {
  std::string target;
  Complex z0;
  Complex t_coord;
  Chart chart;
  std::vector<Tangent> zeta;
  std::vector<std::pair<double, double>> schedule;  // (R, upper bound)
  double decay_exponent;                            // least-squares slope of log b vs log R
};

// Eisenman upper bounds along an increasing radius schedule; the bounds are
// 1/(R r |J|) for the fixed 2-vector J = dF/dz wedge dF/dt at (z0, t0), so
// they decay like 1/R.  Throws if the Jacobian degenerates or the bounds
// fail to decrease.
VanishingCertificate vanishing_certificate(const WeierstrassFibration& x, Complex z0,
                                           const P1Point& t0,
                                           const std::vector<double>& schedule);
VanishingCertificate vanishing_certificate(const WeierstrassFibration& x, Complex z0,
                                           const P1Point& t0,
                                           const std::vector<Tangent>& zeta,
                                           const std::vector<double>& schedule);

struct PullbackReport {
  enum class Status { ok, degenerate_direction };
  Status status;
  double source_bound;           // bound from m at its own zeta
  double composed_bound;         // bound from h after m, measured independently
  double expected_composed;      // source_bound / |h_* zeta|
  double residual;               // |composed - expected| / expected
};

// Checks the transformation law of Eisenman bounds under a holomorphic map
// h of targets: bounds pull back contravariantly with the Jacobian factor.
PullbackReport pullback_check(const TestMap& m,
                              const std::function<TargetPoint(const TargetPoint&)>& h,
                              const MetricSpec& target_metric);

// Minimum over a family of bounds (the infimum only improves with more maps).
double best_bound(const std::vector<double>& bounds);

}  // namespace k3e
