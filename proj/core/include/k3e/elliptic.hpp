#pragma once

#include <optional>
#include <utility>

#include "k3e/common.hpp"

namespace k3e {

// Coefficients of y^2 = 4x^3 - g2 x - g3.
struct CurveCoefficients {
  Complex g2;
  Complex g3;

  Complex disc() const { return g2 * g2 * g2 - 27.0 * g3 * g3; }
  // |disc| measured against the natural scale of the cubic; ~0 means a
  // repeated root and no period lattice.
  double disc_margin() const;
};

// Arithmetic-geometric mean with the optimal square-root branch at every
// step (|a - b| <= |a + b|, ties toward Im(b/a) > 0).  Throws NumericError
// if the iteration fails to contract.
Complex agm(Complex a, Complex b, double tol = 1e-15, int max_iter = 80);

// A lattice in C spanned by two generators, stored in reduced form:
// Im(omega2/omega1) > 0 and tau = omega2/omega1 in the standard fundamental
// domain |Re tau| <= 1/2, |tau| >= 1, boundary representatives on the
// Re tau = -1/2 side.
class PeriodLattice {
 public:
  PeriodLattice(Complex omega1, Complex omega2,
                std::optional<CurveCoefficients> source = std::nullopt);

  Complex omega1() const { return omega1_; }
  Complex omega2() const { return omega2_; }
  Complex tau() const { return omega2_ / omega1_; }
  double covolume() const;
  const std::optional<CurveCoefficients>& source() const { return source_; }

  // Representative of z modulo the lattice in the fundamental parallelogram
  // centered at 0 (coefficients in [-1/2, 1/2)).
  Complex reduce(Complex z) const;

 private:
  Complex omega1_, omega2_;
  std::optional<CurveCoefficients> source_;
};

// Period lattice of dx/sqrt(4x^3 - g2 x - g3): roots of the cubic are
// ordered canonically (descending Re, then descending Im) and the two
// generators come from AGM identities; the result is validated by a cheap
// Eisenstein round trip.  Throws ValidationError when disc == 0.
PeriodLattice period_lattice(const CurveCoefficients& c);

struct ValueWithError {
  Complex value;
  double error_bound;
};

struct EisensteinInvariants {
  ValueWithError g2;
  ValueWithError g3;
};

// g2 = 60 sum 1/w^4 and g3 = 140 sum 1/w^6 over nonzero lattice points, by
// direct summation over |w| <= R with R chosen from the analytic tail bound
// (2 pi / covolume) * R^(2-k) / (k-2), then doubled for safety.  Tolerances
// are absolute bounds per invariant (the single-tolerance form applies one
// bound to both).  Deterministic summation order.
EisensteinInvariants eisenstein_invariants(const PeriodLattice& lat, double tol = 1e-8);
EisensteinInvariants eisenstein_invariants(const PeriodLattice& lat, double tol_g2,
                                           double tol_g3);
ValueWithError eisenstein_g2(const PeriodLattice& lat, double tol = 1e-8);
ValueWithError eisenstein_g3(const PeriodLattice& lat, double tol = 1e-8);

// Weierstrass p-function and derivative.  z is reduced modulo the lattice;
// points within 1e-8 |omega1| of a lattice point raise PoleSignal.  The
// defining sum is evaluated row by row (each row in closed cosecant form),
// truncated when the exponentially decaying row bound drops below tol.
Complex wp(Complex z, const PeriodLattice& lat, double tol = 1e-10);
Complex wp_prime(Complex z, const PeriodLattice& lat, double tol = 1e-10);
std::pair<Complex, Complex> wp_pair(Complex z, const PeriodLattice& lat, double tol = 1e-10);

// Reference evaluation: the raw defining sum over |w| <= radius with
// symmetric (+w, -w) pairing and a rigorous tail bound.  Slow; kept as an
// independent cross-check and for benchmarks.
ValueWithError wp_direct(Complex z, const PeriodLattice& lat, double radius);

// 1728 g2^3 / (g2^3 - 27 g3^2)
Complex j_invariant(const CurveCoefficients& c);

}  // namespace k3e
