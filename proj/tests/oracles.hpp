#pragma once

// Independent reference computations for the test suites.  Everything here
// is deliberately written against the textbook definitions, not the library
// code paths it is used to check.

#include <Eigen/Eigenvalues>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

using Complex = std::complex<double>;
using BigRat = boost::multiprecision::cpp_rational;

// tanh-sinh (double exponential) quadrature on [a, b]; handles integrable
// endpoint singularities.
inline double tanh_sinh(const std::function<double(double)>& f, double a, double b,
                        int levels = 12) {
  const double c = 0.5 * (a + b);
  const double d = 0.5 * (b - a);
  const double pi_half = 1.5707963267948966;

  auto node_sum = [&](double h, bool odd_only) {
    double sum = 0.0;
    const int k_max = static_cast<int>(std::ceil(4.0 / h));
    for (int k = -k_max; k <= k_max; ++k) {
      if (odd_only && k % 2 == 0) continue;
      const double t = k * h;
      const double u = pi_half * std::sinh(t);
      if (std::abs(u) > 350.0) continue;
      const double x = std::tanh(u);
      const double w = pi_half * std::cosh(t) / std::pow(std::cosh(u), 2.0);
      const double arg = c + d * x;
      if (arg <= a || arg >= b) continue;
      sum += w * f(arg);
    }
    return sum;
  };

  double h = 1.0;
  double integral = h * node_sum(h, false);
  for (int level = 1; level < levels; ++level) {
    h *= 0.5;
    const double refined = 0.5 * integral + h * node_sum(h, true);
    const bool settled =
        level > 3 && std::abs(refined - integral) < 1e-14 * (1.0 + std::abs(refined));
    integral = refined;
    if (settled) break;
  }
  return d * integral;
}

// Roots of c[0] + c[1] x + ... + c[n] x^n as companion-matrix eigenvalues.
inline std::vector<Complex> companion_roots(std::vector<Complex> c) {
  while (c.size() > 1 && std::abs(c.back()) == 0.0) c.pop_back();
  const int n = static_cast<int>(c.size()) - 1;
  std::vector<Complex> out;
  if (n < 1) return out;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 1; i < n; ++i) m(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) m(i, n - 1) = -c[static_cast<std::size_t>(i)] / c.back();
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(m, false);
  for (int i = 0; i < n; ++i) out.push_back(solver.eigenvalues()(i));
  return out;
}

// Exact rank of a rational matrix (rows), by Gaussian elimination.
inline int rational_rank(std::vector<std::vector<BigRat>> m) {
  int rank = 0;
  const int rows = static_cast<int>(m.size());
  if (rows == 0) return 0;
  const int cols = static_cast<int>(m[0].size());
  for (int c = 0; c < cols && rank < rows; ++c) {
    int pivot = -1;
    for (int r = rank; r < rows; ++r)
      if (m[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] != 0) {
        pivot = r;
        break;
      }
    if (pivot < 0) continue;
    std::swap(m[static_cast<std::size_t>(rank)], m[static_cast<std::size_t>(pivot)]);
    for (int r = 0; r < rows; ++r) {
      if (r == rank) continue;
      const BigRat f = m[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] /
                       m[static_cast<std::size_t>(rank)][static_cast<std::size_t>(c)];
      if (f == 0) continue;
      for (int cc = c; cc < cols; ++cc)
        m[static_cast<std::size_t>(r)][static_cast<std::size_t>(cc)] -=
            f * m[static_cast<std::size_t>(rank)][static_cast<std::size_t>(cc)];
    }
    ++rank;
  }
  return rank;
}

// Exact determinant of a rational square matrix.
inline BigRat rational_det(std::vector<std::vector<BigRat>> m) {
  const int n = static_cast<int>(m.size());
  BigRat det = 1;
  for (int c = 0; c < n; ++c) {
    int pivot = -1;
    for (int r = c; r < n; ++r)
      if (m[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] != 0) {
        pivot = r;
        break;
      }
    if (pivot < 0) return 0;
    if (pivot != c) {
      std::swap(m[static_cast<std::size_t>(c)], m[static_cast<std::size_t>(pivot)]);
      det = -det;
    }
    det *= m[static_cast<std::size_t>(c)][static_cast<std::size_t>(c)];
    for (int r = c + 1; r < n; ++r) {
      const BigRat f = m[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] /
                       m[static_cast<std::size_t>(c)][static_cast<std::size_t>(c)];
      if (f == 0) continue;
      for (int cc = c; cc < n; ++cc)
        m[static_cast<std::size_t>(r)][static_cast<std::size_t>(cc)] -=
            f * m[static_cast<std::size_t>(c)][static_cast<std::size_t>(cc)];
    }
  }
  return det;
}

// Raw truncated Weierstrass p sum over the coefficient box |m|,|n| <= n_box.
inline Complex wp_box_sum(Complex z, Complex w1, Complex w2, int n_box) {
  Complex s = 1.0 / (z * z);
  for (int m = -n_box; m <= n_box; ++m)
    for (int n = -n_box; n <= n_box; ++n) {
      if (m == 0 && n == 0) continue;
      const Complex w = static_cast<double>(m) * w1 + static_cast<double>(n) * w2;
      const Complex d = z - w;
      s += 1.0 / (d * d) - 1.0 / (w * w);
    }
  return s;
}

// Termwise-differentiated series: wp''(z) = 6 sum over the full lattice of
// 1/(z-w)^4 (including w = 0).
inline Complex wp_second_box_sum(Complex z, Complex w1, Complex w2, int n_box) {
  Complex s = 0.0;
  for (int m = -n_box; m <= n_box; ++m)
    for (int n = -n_box; n <= n_box; ++n) {
      const Complex w = static_cast<double>(m) * w1 + static_cast<double>(n) * w2;
      const Complex d = z - w;
      const Complex d2 = d * d;
      s += 1.0 / (d2 * d2);
    }
  return 6.0 * s;
}

inline Complex wp_prime_box_sum(Complex z, Complex w1, Complex w2, int n_box) {
  Complex s = 0.0;
  for (int m = -n_box; m <= n_box; ++m)
    for (int n = -n_box; n <= n_box; ++n) {
      const Complex w = static_cast<double>(m) * w1 + static_cast<double>(n) * w2;
      const Complex d = z - w;
      s += 1.0 / (d * d * d);
    }
  return -2.0 * s;
}

inline Complex random_complex(std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, 1.0);
  return scale * Complex(g(rng), g(rng));
}

}  // namespace oracle
