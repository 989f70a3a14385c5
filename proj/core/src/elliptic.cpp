#include "k3e/elliptic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "k3e/errors.hpp"
#include "k3e/poly_roots.hpp"

namespace k3e {

namespace {
constexpr double kPi = std::numbers::pi;
}

double CurveCoefficients::disc_margin() const {
  const double s = std::max({std::pow(std::abs(g2), 1.5), std::abs(g3), 1e-300});
  return std::abs(disc()) / (s * s);
}

Complex agm(Complex a, Complex b, double tol, int max_iter) {
  if (a == 0.0 || b == 0.0) throw ValidationError("agm: zero argument");
  for (int i = 0; i < max_iter; ++i) {
    if (std::abs(a - b) <= tol * std::abs(a)) return a;
    const Complex a1 = 0.5 * (a + b);
    Complex b1 = std::sqrt(a * b);
    const double d_minus = std::abs(a1 - b1);
    const double d_plus = std::abs(a1 + b1);
    if (d_minus > d_plus) {
      b1 = -b1;
    } else if (d_minus == d_plus && std::imag(b1 / a1) <= 0.0) {
      b1 = -b1;
    }
    a = a1;
    b = b1;
  }
  if (std::abs(a - b) <= 1e3 * tol * std::abs(a)) return a;
  throw NumericError("agm: no convergence (pathological branch configuration)");
}

PeriodLattice::PeriodLattice(Complex omega1, Complex omega2,
                             std::optional<CurveCoefficients> source)
    : omega1_(omega1), omega2_(omega2), source_(std::move(source)) {
  if (omega1_ == 0.0 || !std::isfinite(std::abs(omega1_)) || !std::isfinite(std::abs(omega2_)))
    throw ValidationError("PeriodLattice: invalid generators");
  Complex tau = omega2_ / omega1_;
  if (std::imag(tau) == 0.0)
    throw ValidationError("PeriodLattice: generators are colinear");
  if (std::imag(tau) < 0.0) omega2_ = -omega2_;

  // SL2(Z) reduction of tau, tracking the generators (the lattice itself is
  // unchanged throughout).
  const double eps = 1e-14;
  bool done = false;
  for (int iter = 0; iter < 200 && !done; ++iter) {
    tau = omega2_ / omega1_;
    const double n = std::round(std::real(tau));
    if (n != 0.0) {
      omega2_ -= n * omega1_;
      tau = omega2_ / omega1_;
    }
    if (std::abs(tau) < 1.0 - eps) {
      const Complex w = omega2_;
      omega2_ = -omega1_;
      omega1_ = w;
    } else {
      done = true;
    }
  }
  if (!done) throw NumericError("PeriodLattice: tau reduction did not converge");

  // boundary representatives: Re tau = -1/2 edge, left half of the unit arc
  tau = omega2_ / omega1_;
  if (std::real(tau) >= 0.5 - eps) {
    omega2_ -= omega1_;
    tau = omega2_ / omega1_;
  }
  if (std::abs(std::abs(tau) - 1.0) <= eps && std::real(tau) > eps) {
    const Complex w = omega2_;
    omega2_ = -omega1_;
    omega1_ = w;
    tau = omega2_ / omega1_;
    if (std::real(tau) >= 0.5 - eps) omega2_ -= omega1_;
  }
}

double PeriodLattice::covolume() const {
  return std::abs(std::imag(std::conj(omega1_) * omega2_));
}

Complex PeriodLattice::reduce(Complex z) const {
  double a = std::imag(std::conj(omega2_) * z) / std::imag(std::conj(omega2_) * omega1_);
  double b = std::imag(std::conj(omega1_) * z) / std::imag(std::conj(omega1_) * omega2_);
  a -= std::round(a);
  b -= std::round(b);
  return a * omega1_ + b * omega2_;
}

namespace {

std::array<Complex, 3> cubic_roots_sorted(const CurveCoefficients& c) {
  const std::vector<Complex> rts = polynomial_roots({-c.g3, -c.g2, 0.0, 4.0});
  std::array<Complex, 3> e{rts[0], rts[1], rts[2]};
  std::sort(e.begin(), e.end(), [](const Complex& x, const Complex& y) {
    if (std::real(x) != std::real(y)) return std::real(x) > std::real(y);
    return std::imag(x) > std::imag(y);
  });
  return e;
}

PeriodLattice lattice_from_roots(const Complex& e1, const Complex& e2, const Complex& e3,
                                 const CurveCoefficients& c) {
  const Complex m1 = agm(std::sqrt(e1 - e3), std::sqrt(e1 - e2));
  const Complex m2 = agm(std::sqrt(e3 - e1), std::sqrt(e3 - e2));
  Complex w1 = kPi / m1;
  Complex w2 = kPi / m2;
  const double im = std::imag(w2 / w1);
  if (std::abs(im) < 1e-12) throw NumericError("period_lattice: degenerate basis");
  if (im < 0.0) w2 = -w2;
  return PeriodLattice(w1, w2, c);
}

// cheap round-trip check used to validate a candidate period basis
bool validates(const PeriodLattice& lat, const CurveCoefficients& c, double rel) {
  // s carries the dimension of g2 (roots squared)
  const double s = std::max({std::abs(c.g2), std::pow(std::abs(c.g3), 2.0 / 3.0), 1e-12});
  const EisensteinInvariants inv =
      eisenstein_invariants(lat, 0.5 * rel * s, 0.5 * rel * std::pow(s, 1.5));
  const double err2 = std::abs(inv.g2.value - c.g2) / s;
  const double err3 = std::abs(inv.g3.value - c.g3) / std::pow(s, 1.5);
  return err2 < rel && err3 < rel;
}

}  // namespace

PeriodLattice period_lattice(const CurveCoefficients& c) {
  if (c.disc_margin() < 1e-14)
    throw ValidationError("period_lattice: discriminant vanishes (degenerate cubic)");
  const auto e = cubic_roots_sorted(c);

  PeriodLattice lat = lattice_from_roots(e[0], e[1], e[2], c);
  if (validates(lat, c, 2e-3)) return lat;

  // Tripwire: the canonical ordering failed validation; try the other root
  // labelings before giving up.
  static const std::array<std::array<int, 3>, 6> perms = {
      {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
  for (const auto& p : perms) {
    PeriodLattice cand = lattice_from_roots(e[static_cast<std::size_t>(p[0])],
                                            e[static_cast<std::size_t>(p[1])],
                                            e[static_cast<std::size_t>(p[2])], c);
    if (validates(cand, c, 2e-3)) return cand;
  }
  throw NumericError("period_lattice: no root ordering passed the round-trip validation");
}

EisensteinInvariants eisenstein_invariants(const PeriodLattice& lat, double tol) {
  return eisenstein_invariants(lat, tol, tol);
}

EisensteinInvariants eisenstein_invariants(const PeriodLattice& lat, double tol_g2,
                                           double tol_g3) {
  if (!(tol_g2 > 0.0 && tol_g3 > 0.0))
    throw ValidationError("eisenstein_invariants: tolerance must be positive");
  // Work on the normalized lattice Z + tau Z; map the requested absolute
  // tolerances through the homogeneity g_k(w1 L') = w1^-k g_k(L').
  const Complex w1 = lat.omega1();
  const Complex tau = lat.tau();
  const double a_cov = std::imag(tau);  // covolume of Z + tau Z
  const double s1 = std::abs(w1);
  const double tol4 = tol_g2 * s1 * s1 * s1 * s1;
  const double tol6 = tol_g3 * s1 * s1 * s1 * s1 * s1 * s1;

  // tail(k, R) = coef_k * (2 pi / A) * R^(2-k) / (k-2) * (1 + c/R)
  const double slop = 2.0 * (1.0 + std::abs(tau));
  auto radius_for = [&](double coef, int k, double t) {
    double r = std::pow(coef * (2.0 * kPi / a_cov) / (static_cast<double>(k - 2) * t),
                        1.0 / (k - 2));
    for (int i = 0; i < 4; ++i)
      r = std::pow(coef * (2.0 * kPi / a_cov) * (1.0 + slop / r) /
                       (static_cast<double>(k - 2) * t),
                   1.0 / (k - 2));
    return 2.0 * r;  // doubled once for safety
  };
  const double r4 = radius_for(60.0, 4, tol4);
  const double r6 = radius_for(140.0, 6, tol6);
  const double radius = std::max(std::max(r4, r6), 3.0 * (1.0 + std::abs(tau)));

  const double est_points = kPi * radius * radius / (2.0 * a_cov);  // half-plane
  if (est_points > 2.5e9)
    throw NumericError("eisenstein_invariants: tolerance unachievable within resource limits");

  // Sum over half the lattice (rows m >= 0; row 0 only n >= 1) and double:
  // terms at +w and -w coincide for even powers.
  const double tau_re = std::real(tau);
  const double tau_im = std::imag(tau);
  Complex s4 = 0.0, s6 = 0.0;
  const int m_max = static_cast<int>(std::floor(radius / tau_im));
  for (int m = 0; m <= m_max; ++m) {
    const double y = m * tau_im;
    const double x0 = m * tau_re;
    const double half_w = std::sqrt(std::max(radius * radius - y * y, 0.0));
    int n_lo = static_cast<int>(std::ceil(-x0 - half_w));
    const int n_hi = static_cast<int>(std::floor(-x0 + half_w));
    if (m == 0) n_lo = std::max(n_lo, 1);
    Complex row4 = 0.0, row6 = 0.0;
    for (int n = n_lo; n <= n_hi; ++n) {
      const double re = x0 + n;
      const double r2 = re * re + y * y;
      // 1/w^2 = conj(w)^2 / |w|^4
      const double inv_r4 = 1.0 / (r2 * r2);
      const Complex iw2((re * re - y * y) * inv_r4, -2.0 * re * y * inv_r4);
      const Complex iw4 = iw2 * iw2;
      row4 += iw4;
      row6 += iw4 * iw2;
    }
    s4 += row4;
    s6 += row6;
  }
  s4 *= 2.0;
  s6 *= 2.0;

  const Complex w1_2 = w1 * w1;
  const Complex w1_4 = w1_2 * w1_2;
  const Complex w1_6 = w1_4 * w1_2;
  const double tail4 = 60.0 * (2.0 * kPi / a_cov) / (2.0 * radius * radius) *
                       (1.0 + slop / radius) / std::pow(s1, 4.0);
  const double tail6 = 140.0 * (2.0 * kPi / a_cov) / (4.0 * std::pow(radius, 4.0)) *
                       (1.0 + slop / radius) / std::pow(s1, 6.0);
  return {{60.0 * s4 / w1_4, tail4}, {140.0 * s6 / w1_6, tail6}};
}

ValueWithError eisenstein_g2(const PeriodLattice& lat, double tol) {
  return eisenstein_invariants(lat, tol).g2;
}

ValueWithError eisenstein_g3(const PeriodLattice& lat, double tol) {
  return eisenstein_invariants(lat, tol).g3;
}

namespace {

// 1/sin^2(pi w) and cos(pi w)/sin^3(pi w) through q = exp(2 pi i w), valid
// and stable for Im w >= 0 (|q| <= 1); parity extends to the lower half.
Complex csc2_pi(Complex w) {
  if (std::imag(w) < 0.0) w = -w;
  const Complex q = std::exp(Complex(0.0, 2.0 * kPi) * w);
  const Complex d = 1.0 - q;
  return -4.0 * q / (d * d);
}

Complex cot_csc2_pi(Complex w) {
  double sign = 1.0;
  if (std::imag(w) < 0.0) {
    w = -w;
    sign = -1.0;
  }
  const Complex q = std::exp(Complex(0.0, 2.0 * kPi) * w);
  const Complex d = 1.0 - q;
  return sign * Complex(0.0, 4.0) * q * (1.0 + q) / (d * d * d);
}

}  // namespace

std::pair<Complex, Complex> wp_pair(Complex z, const PeriodLattice& lat, double tol) {
  if (!(tol > 0.0)) throw ValidationError("wp: tolerance must be positive");
  const Complex w1 = lat.omega1();
  const Complex zr = lat.reduce(z);
  const double eps_pole = 1e-8 * std::abs(w1);
  if (std::abs(zr) < eps_pole) throw PoleSignal("wp: z is a lattice point");

  const Complex u = zr / w1;
  const Complex tau = lat.tau();
  const double tau_im = std::imag(tau);
  const double s1 = std::abs(w1);

  // Rows decay like exp(-2 pi tau_im (m - 1/2)); pick M for the requested
  // tolerance on the normalized lattice.
  const double tol_n = std::max(tol * s1 * s1, 1e-16);
  double m_real = std::log(640.0 * kPi * kPi * kPi / tol_n) / (2.0 * kPi * tau_im) + 1.0;
  const int m_max = std::max(2, static_cast<int>(std::ceil(m_real)));
  if (m_max > 200000) throw NumericError("wp: tolerance unachievable");

  const double pi2 = kPi * kPi;
  Complex p = pi2 * csc2_pi(u) - pi2 / 3.0;
  Complex dp = cot_csc2_pi(u);
  for (int m = 1; m <= m_max; ++m) {
    const Complex mt = static_cast<double>(m) * tau;
    p += pi2 * (csc2_pi(u - mt) + csc2_pi(u + mt) - 2.0 * csc2_pi(mt));
    dp += cot_csc2_pi(u - mt) + cot_csc2_pi(u + mt);
  }
  dp *= -2.0 * kPi * pi2;

  const Complex w1_2 = w1 * w1;
  return {p / w1_2, dp / (w1_2 * w1)};
}

Complex wp(Complex z, const PeriodLattice& lat, double tol) {
  return wp_pair(z, lat, tol).first;
}

Complex wp_prime(Complex z, const PeriodLattice& lat, double tol) {
  return wp_pair(z, lat, tol).second;
}

ValueWithError wp_direct(Complex z, const PeriodLattice& lat, double radius) {
  const Complex zr = lat.reduce(z);
  const double eps_pole = 1e-8 * std::abs(lat.omega1());
  if (std::abs(zr) < eps_pole) throw PoleSignal("wp_direct: z is a lattice point");
  const double az = std::abs(zr);
  if (radius < 4.0 * az + 4.0 * (std::abs(lat.omega1()) + std::abs(lat.omega2())))
    throw ValidationError("wp_direct: radius too small for the tail bound");

  const Complex w1 = lat.omega1();
  const Complex w2 = lat.omega2();
  const double a_cov = lat.covolume();
  Complex sum = 1.0 / (zr * zr);
  // pair +w with -w: both lie in the disk together, and the combined term
  // decays like |w|^-4
  const int m_max = static_cast<int>(std::ceil(radius * std::abs(w2) / a_cov)) + 1;
  const int n_max = static_cast<int>(std::ceil(radius * std::abs(w1) / a_cov)) + 1;
  for (int m = 0; m <= m_max; ++m) {
    for (int n = (m == 0 ? 1 : -n_max); n <= n_max; ++n) {
      const Complex w = static_cast<double>(m) * w2 + static_cast<double>(n) * w1;
      if (std::abs(w) > radius) continue;
      const Complex d1 = zr - w;
      const Complex d2 = zr + w;
      sum += 1.0 / (d1 * d1) + 1.0 / (d2 * d2) - 2.0 / (w * w);
    }
  }
  // |paired tail term| <= 6|z|^2/|w|^4 * (1 + O(|z|/|w|)); integrate the disk
  const double tail = 9.0 * az * az * (2.0 * kPi / a_cov) / (2.0 * radius * radius) *
                      (1.0 + 8.0 * (std::abs(w1) + std::abs(w2)) / radius);
  return {sum, tail};
}

Complex j_invariant(const CurveCoefficients& c) {
  if (c.disc_margin() < 1e-14)
    throw ValidationError("j_invariant: discriminant vanishes");
  const Complex g2_cubed = c.g2 * c.g2 * c.g2;
  return 1728.0 * g2_cubed / c.disc();
}

}  // namespace k3e
