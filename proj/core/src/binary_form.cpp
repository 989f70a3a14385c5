#include "k3e/binary_form.hpp"

#include <algorithm>
#include <cmath>

#include "k3e/errors.hpp"
#include "k3e/poly_roots.hpp"

namespace k3e {

P1Point::P1Point(Complex s, Complex t) : s_(s), t_(t) {
  const double as = std::abs(s);
  const double at = std::abs(t);
  if (as == 0.0 && at == 0.0)
    throw ValidationError("P1Point: both homogeneous coordinates are zero");
  if (!std::isfinite(as) || !std::isfinite(at))
    throw ValidationError("P1Point: non-finite coordinate");
}

P1Point P1Point::canonicalized() const {
  if (std::abs(s_) >= std::abs(t_)) return P1Point(1.0, t_ / s_);
  return P1Point(s_ / t_, 1.0);
}

Complex P1Point::affine_coord() const {
  if (is_infinity()) throw ValidationError("P1Point: affine coordinate of infinity");
  return t_ / s_;
}

double chordal_distance(const P1Point& a, const P1Point& b) {
  const P1Point ca = a.canonicalized();
  const P1Point cb = b.canonicalized();
  const double num = std::abs(ca.s() * cb.t() - ca.t() * cb.s());
  const double na = std::sqrt(std::norm(ca.s()) + std::norm(ca.t()));
  const double nb = std::sqrt(std::norm(cb.s()) + std::norm(cb.t()));
  return num / (na * nb);
}

bool approx_equal(const P1Point& a, const P1Point& b, double tol) {
  const P1Point ca = a.canonicalized();
  const P1Point cb = b.canonicalized();
  return std::abs(ca.s() * cb.t() - ca.t() * cb.s()) <= tol;
}

BinaryForm::BinaryForm(int degree, std::vector<Complex> coeffs)
    : degree_(degree), coeffs_(std::move(coeffs)) {
  if (degree < 0) throw ValidationError("BinaryForm: negative degree");
  if (coeffs_.size() != static_cast<std::size_t>(degree) + 1)
    throw ValidationError("BinaryForm: coefficient count does not match degree + 1");
}

BinaryForm BinaryForm::zero(int degree) {
  return BinaryForm(degree, std::vector<Complex>(static_cast<std::size_t>(degree) + 1, 0.0));
}

BinaryForm BinaryForm::monomial(int degree, int t_power, Complex c) {
  if (t_power < 0 || t_power > degree)
    throw ValidationError("BinaryForm::monomial: t power out of range");
  std::vector<Complex> coeffs(static_cast<std::size_t>(degree) + 1, 0.0);
  coeffs[static_cast<std::size_t>(t_power)] = c;
  return BinaryForm(degree, std::move(coeffs));
}

double BinaryForm::norm_inf() const {
  double m = 0.0;
  for (const Complex& c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

bool BinaryForm::is_zero(double tol) const { return norm_inf() <= tol; }

Complex BinaryForm::eval(const P1Point& p) const {
  // Horner in the ratio of smaller to larger coordinate keeps intermediates
  // bounded by ||f|| times a power of the larger coordinate.
  const Complex s = p.s();
  const Complex t = p.t();
  if (std::abs(s) >= std::abs(t)) {
    const Complex u = t / s;  // |u| <= 1
    Complex acc = coeffs_.back();
    for (int k = degree_ - 1; k >= 0; --k) acc = acc * u + coeffs_[static_cast<std::size_t>(k)];
    Complex sp = 1.0;
    for (int k = 0; k < degree_; ++k) sp *= s;
    return acc * sp;
  }
  const Complex v = s / t;  // |v| <= 1
  Complex acc = coeffs_.front();
  for (int k = 1; k <= degree_; ++k) acc = acc * v + coeffs_[static_cast<std::size_t>(k)];
  Complex tp = 1.0;
  for (int k = 0; k < degree_; ++k) tp *= t;
  return acc * tp;
}

Complex BinaryForm::eval_affine(Complex t) const {
  Complex acc = coeffs_.back();
  for (int k = degree_ - 1; k >= 0; --k) acc = acc * t + coeffs_[static_cast<std::size_t>(k)];
  return acc;
}

Complex BinaryForm::eval_coaffine(Complex s) const {
  Complex acc = coeffs_.front();
  for (int k = 1; k <= degree_; ++k) acc = acc * s + coeffs_[static_cast<std::size_t>(k)];
  return acc;
}

BinaryForm multiply(const BinaryForm& f, const BinaryForm& g) {
  const int d = f.degree() + g.degree();
  std::vector<Complex> out(static_cast<std::size_t>(d) + 1, 0.0);
  for (int i = 0; i <= f.degree(); ++i) {
    const Complex fi = f.coeff(i);
    if (fi == 0.0) continue;
    for (int j = 0; j <= g.degree(); ++j)
      out[static_cast<std::size_t>(i + j)] += fi * g.coeff(j);
  }
  return BinaryForm(d, std::move(out));
}

BinaryForm power(const BinaryForm& f, int k) {
  if (k < 0) throw ValidationError("power: negative exponent");
  BinaryForm acc(0, {1.0});
  for (int i = 0; i < k; ++i) acc = multiply(acc, f);
  return acc;
}

BinaryForm scale(const BinaryForm& f, Complex c) {
  std::vector<Complex> out = f.coeffs();
  for (Complex& x : out) x *= c;
  return BinaryForm(f.degree(), std::move(out));
}

BinaryForm add(const BinaryForm& f, const BinaryForm& g) {
  if (f.degree() != g.degree()) throw ValidationError("add: degree mismatch");
  std::vector<Complex> out = f.coeffs();
  for (int k = 0; k <= g.degree(); ++k) out[static_cast<std::size_t>(k)] += g.coeff(k);
  return BinaryForm(f.degree(), std::move(out));
}

BinaryForm subtract(const BinaryForm& f, const BinaryForm& g) {
  if (f.degree() != g.degree()) throw ValidationError("subtract: degree mismatch");
  std::vector<Complex> out = f.coeffs();
  for (int k = 0; k <= g.degree(); ++k) out[static_cast<std::size_t>(k)] -= g.coeff(k);
  return BinaryForm(f.degree(), std::move(out));
}

BinaryForm discriminant_form(const BinaryForm& g2, const BinaryForm& g3) {
  if (g2.degree() != 8) throw ValidationError("discriminant_form: g2 must have degree 8");
  if (g3.degree() != 12) throw ValidationError("discriminant_form: g3 must have degree 12");
  return subtract(power(g2, 3), scale(power(g3, 2), 27.0));
}

std::vector<RootOnP1> roots(const BinaryForm& f) {
  const double norm = f.norm_inf();
  if (norm == 0.0) throw ValidationError("roots: zero form");

  // Affine degree by relative threshold; the deficit is the multiplicity of
  // the zero at infinity.
  const double trim = 1e-12 * norm;
  int affine_degree = f.degree();
  while (affine_degree > 0 && std::abs(f.coeff(affine_degree)) <= trim) --affine_degree;

  std::vector<RootOnP1> out;
  if (affine_degree > 0) {
    std::vector<Complex> c(f.coeffs().begin(), f.coeffs().begin() + affine_degree + 1);
    const std::vector<Complex> raw = polynomial_roots(c);
    double max_root = 0.0;
    for (const Complex& r : raw) max_root = std::max(max_root, std::abs(r));
    const double eps_cluster = 1e-6 * (1.0 + max_root);
    for (const auto& [center, count] : cluster_points(raw, eps_cluster))
      out.push_back({P1Point::affine(center).canonicalized(), count});
  }

  const int inf_mult = f.degree() - affine_degree;
  if (inf_mult > 0) out.push_back({P1Point::infinity(), inf_mult});
  return out;
}

}  // namespace k3e
