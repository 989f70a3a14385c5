#pragma once

#include <array>
#include <random>
#include <string>
#include <vector>

#include "k3e/binary_form.hpp"
#include "k3e/common.hpp"
#include "k3e/elliptic.hpp"

namespace k3e {

// Which affine trivialization a fiberwise computation runs in.  Canonical
// points with |t| <= 1 use the s=1 chart (affine coordinate t); points near
// infinity use the t=1 chart (affine coordinate s).
enum class Chart { s_one, t_one };

Chart chart_of(const P1Point& p);
Complex chart_coord(const P1Point& p);

// y^2 z = 4 x^3 - g2 x z^2 - g3 z^3 over P^1 with g2 of degree 8 and g3 of
// degree 12; an elliptic K3 surface with section in Weierstrass form.
// Construction validates the degrees, rejects an identically vanishing
// discriminant, and caches the singular locus.
class WeierstrassFibration {
 public:
  WeierstrassFibration(BinaryForm g2, BinaryForm g3);

  const BinaryForm& g2() const { return g2_; }
  const BinaryForm& g3() const { return g3_; }
  const BinaryForm& delta() const { return delta_; }
  const std::vector<RootOnP1>& singular_locus() const { return singular_locus_; }

 private:
  BinaryForm g2_, g3_, delta_;
  std::vector<RootOnP1> singular_locus_;
};

struct RegularityReport {
  bool regular;
  double chordal_distance;  // to the nearest singular point
};

// Regular iff chordally farther than 1e-6 from every point of S_X.
RegularityReport is_regular(const WeierstrassFibration& x, const P1Point& t);

// (lambda^4 g2, lambda^6 g3); scalar lambda != 0.
WeierstrassFibration rescale(const WeierstrassFibration& x, Complex lambda);

struct KodairaLabel {
  enum class Kind { smooth, i_n, ii, iii, iv, i0_star, in_star, iv_star, iii_star, ii_star };
  Kind kind;
  int n;  // the index for I_n / I_n* families, 0 otherwise
  int ord_g2, ord_g3, ord_delta;
  std::string name() const;
};

// Kodaira type of the fiber over p from the vanishing orders
// (ord g2, ord g3, ord delta).  Throws ValidationError for non-minimal data
// (ord g2 >= 4 and ord g3 >= 6); points off the singular locus come back
// smooth.
KodairaLabel kodaira_type(const WeierstrassFibration& x, const P1Point& p);

// The declared (a, b, c) -> label table as JSON, for audit.
std::string kodaira_table_json();

// Fiber coefficients (g2(t), g3(t)) in the canonical affine trivialization
// at t.  Throws ValidationError over the singular locus.
CurveCoefficients fiber_curve(const WeierstrassFibration& x, const P1Point& t);
CurveCoefficients fiber_curve_in_chart(const WeierstrassFibration& x, Chart chart,
                                       Complex coord);

// A point of the fiber in projective coordinates [x : y : z], canonicalized
// so the coordinate of largest modulus is exactly 1.
class FiberPoint {
 public:
  FiberPoint(Complex x, Complex y, Complex z);
  Complex x() const { return v_[0]; }
  Complex y() const { return v_[1]; }
  Complex z() const { return v_[2]; }
  // [0 : 1 : 0], where the section meets the fiber
  bool is_section() const;

 private:
  std::array<Complex, 3> v_;
};

// F(z, t) = [wp(z) : wp'(z) : 1] on the fiber over t, with lattice points
// mapped to the section point.
FiberPoint uniformize(const WeierstrassFibration& x, Complex z, const P1Point& t,
                      double tol = 1e-10);

// Partial derivatives of F in the affine chart of the image: rows are
// d/dz and d/d(t-coordinate) of (x, y, 1).  Central differences with step h,
// the z-row cross-checked against the closed forms wp' and 6 wp^2 - g2/2.
struct JacobianF {
  std::array<std::array<Complex, 3>, 2> rows;
  Chart chart;
  Complex t_coord;
  double step;
};

JacobianF jacobian_f(const WeierstrassFibration& x, Complex z, const P1Point& t,
                     double h = 0.0);

// Degree-8/12 coefficient pair with independent standard complex Gaussian
// coefficients; resamples until the discriminant is honestly nonzero.
WeierstrassFibration random_fibration(std::mt19937_64& rng);

}  // namespace k3e
