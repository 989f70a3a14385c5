#include "k3e/poly_roots.hpp"

#include <algorithm>
#include <cmath>

#include "k3e/errors.hpp"

namespace k3e {

namespace {

// p(x) and p'(x) by a joint Horner pass, ascending coefficients.
std::pair<Complex, Complex> horner2(const std::vector<Complex>& c, Complex x) {
  Complex p = c.back();
  Complex dp = 0.0;
  for (int k = static_cast<int>(c.size()) - 2; k >= 0; --k) {
    dp = dp * x + p;
    p = p * x + c[k];
  }
  return {p, dp};
}

Complex solve_quadratic_stable(Complex a, Complex b, Complex c, bool first) {
  // roots of a x^2 + b x + c, picking the branch that avoids cancellation
  const Complex disc = std::sqrt(b * b - 4.0 * a * c);
  const Complex q = (std::real(std::conj(b) * disc) >= 0.0) ? -0.5 * (b + disc)
                                                            : -0.5 * (b - disc);
  if (first) return q / a;
  return c / q;
}

}  // namespace

std::vector<Complex> polynomial_roots(const std::vector<Complex>& coeffs) {
  if (coeffs.empty()) throw ValidationError("polynomial_roots: empty coefficient list");
  double norm = 0.0;
  for (const Complex& c : coeffs) norm = std::max(norm, std::abs(c));
  if (norm == 0.0) throw ValidationError("polynomial_roots: zero polynomial");
  if (std::abs(coeffs.back()) <= 1e-14 * norm)
    throw ValidationError("polynomial_roots: leading coefficient is (numerically) zero");

  // Split off exact roots at the origin so clusters of high multiplicity at 0
  // come out sharp instead of as an Aberth ring.
  std::vector<Complex> c = coeffs;
  std::vector<Complex> roots;
  std::size_t low = 0;
  while (low + 1 < c.size() && std::abs(c[low]) <= 1e-14 * norm) ++low;
  if (low > 0) {
    roots.assign(low, Complex(0.0, 0.0));
    c.erase(c.begin(), c.begin() + static_cast<long>(low));
  }

  const int n = static_cast<int>(c.size()) - 1;
  if (n == 0) return roots;
  if (n == 1) {
    roots.push_back(-c[0] / c[1]);
    return roots;
  }
  if (n == 2) {
    roots.push_back(solve_quadratic_stable(c[2], c[1], c[0], true));
    roots.push_back(solve_quadratic_stable(c[2], c[1], c[0], false));
    return roots;
  }

  for (Complex& ck : c) ck /= norm;

  // Cauchy-style radius for the initial circle; the angle twist breaks the
  // symmetry of polynomials like x^n - 1.
  double radius = 0.0;
  for (int k = 0; k < n; ++k) radius = std::max(radius, std::abs(c[k] / c[n]));
  radius = 0.5 * (1.0 + radius);
  std::vector<Complex> z(n);
  for (int i = 0; i < n; ++i) {
    const double theta = 2.0 * M_PI * (i + 0.5) / n + 0.43;
    z[i] = radius * Complex(std::cos(theta), std::sin(theta));
  }

  std::vector<bool> frozen(n, false);
  const int max_iter = 600;
  for (int iter = 0; iter < max_iter; ++iter) {
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
      if (frozen[i]) continue;
      auto [p, dp] = horner2(c, z[i]);
      if (std::abs(dp) < 1e-300) {
        z[i] += Complex(1e-8, 1e-8) * (1.0 + std::abs(z[i]));
        worst = 1.0;
        continue;
      }
      const Complex w = p / dp;
      Complex s = 0.0;
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        const Complex d = z[i] - z[j];
        if (std::abs(d) < 1e-300) continue;
        s += 1.0 / d;
      }
      const Complex denom = 1.0 - w * s;
      const Complex step = (std::abs(denom) < 1e-300) ? w : w / denom;
      z[i] -= step;
      const double rel = std::abs(step) / (1.0 + std::abs(z[i]));
      worst = std::max(worst, rel);
      if (rel < 1e-15) frozen[i] = true;
    }
    if (worst < 1e-15) break;
  }

  roots.insert(roots.end(), z.begin(), z.end());
  return roots;
}

std::vector<std::pair<Complex, int>> cluster_points(const std::vector<Complex>& points,
                                                    double radius) {
  std::vector<Complex> sorted = points;
  std::sort(sorted.begin(), sorted.end(), [](const Complex& a, const Complex& b) {
    if (std::real(a) != std::real(b)) return std::real(a) < std::real(b);
    return std::imag(a) < std::imag(b);
  });

  std::vector<Complex> sums;
  std::vector<int> counts;
  for (const Complex& p : sorted) {
    int hit = -1;
    for (std::size_t k = 0; k < sums.size(); ++k) {
      const Complex center = sums[k] / static_cast<double>(counts[k]);
      if (std::abs(p - center) <= radius) {
        hit = static_cast<int>(k);
        break;
      }
    }
    if (hit < 0) {
      sums.push_back(p);
      counts.push_back(1);
    } else {
      sums[hit] += p;
      counts[hit] += 1;
    }
  }

  std::vector<std::pair<Complex, int>> out;
  out.reserve(sums.size());
  for (std::size_t k = 0; k < sums.size(); ++k)
    out.emplace_back(sums[k] / static_cast<double>(counts[k]), counts[k]);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (std::real(a.first) != std::real(b.first)) return std::real(a.first) < std::real(b.first);
    return std::imag(a.first) < std::imag(b.first);
  });
  return out;
}

}  // namespace k3e
