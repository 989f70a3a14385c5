#pragma once

#include <vector>

#include "k3e/common.hpp"

namespace k3e {

// A point of the projective line.  The homogeneous pair is kept exactly as
// given (forms are evaluated on representatives); canonicalized() rescales
// so the coordinate of larger modulus is exactly 1, which is the
// representative used for comparisons and for reported roots.
class P1Point {
 public:
  P1Point(Complex s, Complex t);

  static P1Point affine(Complex t) { return P1Point(1.0, t); }
  static P1Point infinity() { return P1Point(0.0, 1.0); }

  Complex s() const { return s_; }
  Complex t() const { return t_; }
  bool is_infinity() const { return s_ == 0.0; }

  P1Point canonicalized() const;

  // t/s; throws for the point at infinity.
  Complex affine_coord() const;

 private:
  Complex s_, t_;
};

// Fubini-Study chordal distance on P^1 (range [0,1], chart independent).
double chordal_distance(const P1Point& a, const P1Point& b);

// Projective equality up to tolerance (|s1 t2 - t1 s2| <= tol on canonical
// representatives).
bool approx_equal(const P1Point& a, const P1Point& b, double tol);

// A homogeneous form of fixed degree d on P^1.  coeffs()[k] multiplies
// s^(d-k) t^k, so the affine chart s=1 reads the coefficients as an
// ascending polynomial in t.
class BinaryForm {
 public:
  BinaryForm(int degree, std::vector<Complex> coeffs);

  static BinaryForm zero(int degree);
  // c * s^(d - t_power) t^t_power
  static BinaryForm monomial(int degree, int t_power, Complex c = 1.0);

  int degree() const { return degree_; }
  const std::vector<Complex>& coeffs() const { return coeffs_; }
  Complex coeff(int k) const { return coeffs_[static_cast<std::size_t>(k)]; }

  double norm_inf() const;
  bool is_zero(double tol = 0.0) const;  // max|coeff| <= tol

  Complex eval(const P1Point& p) const;
  Complex eval_affine(Complex t) const;    // chart s = 1
  Complex eval_coaffine(Complex s) const;  // chart t = 1

 private:
  int degree_;
  std::vector<Complex> coeffs_;
};

BinaryForm multiply(const BinaryForm& f, const BinaryForm& g);
BinaryForm power(const BinaryForm& f, int k);
BinaryForm scale(const BinaryForm& f, Complex c);
BinaryForm add(const BinaryForm& f, const BinaryForm& g);
BinaryForm subtract(const BinaryForm& f, const BinaryForm& g);

// g2^3 - 27 g3^2 for g2 of degree 8 and g3 of degree 12; a degree-24 form.
BinaryForm discriminant_form(const BinaryForm& g2, const BinaryForm& g3);

struct RootOnP1 {
  P1Point point;
  int multiplicity;
};

// All zeros of a nonzero form, with multiplicities summing to the degree.
// The point at infinity carries the deficit between the declared degree and
// the numerically detected affine degree; affine roots are clustered within
// 1e-6 * (1 + max|root|).  Sorted with affine roots first (by Re, then Im),
// infinity last.
std::vector<RootOnP1> roots(const BinaryForm& f);

}  // namespace k3e
