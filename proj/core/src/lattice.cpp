#include "k3e/lattice.hpp"

#include <algorithm>
#include <array>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <numeric>

#include "k3e/errors.hpp"

namespace k3e {

using BigRat = boost::multiprecision::cpp_rational;

IntegralLattice::IntegralLattice(int rank, std::vector<long long> gram)
    : rank_(rank), gram_(std::move(gram)) {
  if (rank < 0) throw ValidationError("IntegralLattice: negative rank");
  if (gram_.size() != static_cast<std::size_t>(rank) * static_cast<std::size_t>(rank))
    throw ValidationError("IntegralLattice: Gram size does not match rank");
  for (int i = 0; i < rank; ++i)
    for (int j = 0; j < i; ++j)
      if ((*this)(i, j) != (*this)(j, i))
        throw ValidationError("IntegralLattice: Gram matrix is not symmetric");
}

bool IntegralLattice::is_even() const {
  for (int i = 0; i < rank_; ++i)
    if ((*this)(i, i) % 2 != 0) return false;
  return true;
}

IntegralLattice lattice_u() { return IntegralLattice(2, {0, 1, 1, 0}); }

IntegralLattice lattice_e8_minus() {
  // Negated E8 Cartan matrix, Bourbaki numbering: the chain 1-3-4-5-6-7-8
  // with node 2 attached to node 4.
  static const std::array<std::pair<int, int>, 7> edges = {
      {{0, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 7}, {1, 3}}};
  std::vector<long long> g(64, 0);
  for (int i = 0; i < 8; ++i) g[static_cast<std::size_t>(i) * 8 + i] = -2;
  for (const auto& [a, b] : edges) {
    g[static_cast<std::size_t>(a) * 8 + b] = 1;
    g[static_cast<std::size_t>(b) * 8 + a] = 1;
  }
  return IntegralLattice(8, std::move(g));
}

IntegralLattice direct_sum(const IntegralLattice& a, const IntegralLattice& b) {
  const int n = a.rank() + b.rank();
  std::vector<long long> g(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0);
  for (int i = 0; i < a.rank(); ++i)
    for (int j = 0; j < a.rank(); ++j)
      g[static_cast<std::size_t>(i) * n + j] = a(i, j);
  for (int i = 0; i < b.rank(); ++i)
    for (int j = 0; j < b.rank(); ++j)
      g[static_cast<std::size_t>(a.rank() + i) * n + (a.rank() + j)] = b(i, j);
  return IntegralLattice(n, std::move(g));
}

IntegralLattice k3_lattice() {
  IntegralLattice l = direct_sum(lattice_e8_minus(), lattice_e8_minus());
  l = direct_sum(l, lattice_u());
  l = direct_sum(l, lattice_u());
  l = direct_sum(l, lattice_u());
  return l;
}

namespace {

struct Inertia {
  int positive = 0, negative = 0, zero = 0;
};

// Exact inertia by symmetric (congruence) elimination over the rationals.
Inertia inertia_exact(const IntegralLattice& lat) {
  const int n = lat.rank();
  std::vector<std::vector<BigRat>> m(static_cast<std::size_t>(n),
                                     std::vector<BigRat>(static_cast<std::size_t>(n)));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = lat(i, j);

  Inertia out;
  for (int i = 0; i < n; ++i) {
    auto& mi = m[static_cast<std::size_t>(i)];
    if (mi[static_cast<std::size_t>(i)] == 0) {
      // pull in a nonzero diagonal from below, or synthesize one
      int pivot = -1;
      for (int j = i + 1; j < n; ++j)
        if (m[static_cast<std::size_t>(j)][static_cast<std::size_t>(j)] != 0) {
          pivot = j;
          break;
        }
      if (pivot >= 0) {
        std::swap(m[static_cast<std::size_t>(i)], m[static_cast<std::size_t>(pivot)]);
        for (int r = 0; r < n; ++r)
          std::swap(m[static_cast<std::size_t>(r)][static_cast<std::size_t>(i)],
                    m[static_cast<std::size_t>(r)][static_cast<std::size_t>(pivot)]);
      } else {
        int off = -1;
        for (int j = i + 1; j < n; ++j)
          if (m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] != 0) {
            off = j;
            break;
          }
        if (off >= 0) {
          // with both diagonals zero, e_i += e_off gives diagonal 2*m[i][off]
          for (int r = 0; r < n; ++r)
            m[static_cast<std::size_t>(i)][static_cast<std::size_t>(r)] +=
                m[static_cast<std::size_t>(off)][static_cast<std::size_t>(r)];
          for (int r = 0; r < n; ++r)
            m[static_cast<std::size_t>(r)][static_cast<std::size_t>(i)] +=
                m[static_cast<std::size_t>(r)][static_cast<std::size_t>(off)];
        }
      }
    }
    const BigRat p = m[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)];
    if (p == 0) {
      ++out.zero;
      continue;
    }
    if (p > 0)
      ++out.positive;
    else
      ++out.negative;
    for (int j = i + 1; j < n; ++j) {
      const BigRat f = m[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] / p;
      if (f == 0) continue;
      for (int r = 0; r < n; ++r)
        m[static_cast<std::size_t>(j)][static_cast<std::size_t>(r)] -=
            f * m[static_cast<std::size_t>(i)][static_cast<std::size_t>(r)];
      for (int r = 0; r < n; ++r)
        m[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)] -=
            f * m[static_cast<std::size_t>(r)][static_cast<std::size_t>(i)];
    }
  }
  return out;
}

}  // namespace

std::pair<int, int> signature(const IntegralLattice& lat) {
  const Inertia in = inertia_exact(lat);
  if (in.zero > 0) throw NumericError("signature: degenerate Gram matrix");
  return {in.positive, in.negative};
}

BigInt determinant(const IntegralLattice& lat) {
  const int n = lat.rank();
  if (n == 0) return 1;
  std::vector<std::vector<BigInt>> m(static_cast<std::size_t>(n),
                                     std::vector<BigInt>(static_cast<std::size_t>(n)));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = lat(i, j);

  // Bareiss fraction-free elimination
  BigInt prev = 1;
  int sign = 1;
  for (int k = 0; k + 1 < n; ++k) {
    if (m[static_cast<std::size_t>(k)][static_cast<std::size_t>(k)] == 0) {
      int swap_row = -1;
      for (int i = k + 1; i < n; ++i)
        if (m[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] != 0) {
          swap_row = i;
          break;
        }
      if (swap_row < 0) return 0;
      std::swap(m[static_cast<std::size_t>(k)], m[static_cast<std::size_t>(swap_row)]);
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i) {
      for (int j = k + 1; j < n; ++j) {
        BigInt num = m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] *
                         m[static_cast<std::size_t>(k)][static_cast<std::size_t>(k)] -
                     m[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] *
                         m[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)];
        m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = num / prev;
      }
      m[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] = 0;
    }
    prev = m[static_cast<std::size_t>(k)][static_cast<std::size_t>(k)];
  }
  return sign * m[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(n - 1)];
}

long long pairing(const IntegralLattice& lat, std::span<const long long> v,
                  std::span<const long long> w) {
  const int n = lat.rank();
  if (static_cast<int>(v.size()) != n || static_cast<int>(w.size()) != n)
    throw ValidationError("pairing: vector length does not match rank");
  long long acc = 0;
  for (int i = 0; i < n; ++i) {
    if (v[static_cast<std::size_t>(i)] == 0) continue;
    long long row = 0;
    for (int j = 0; j < n; ++j) row += lat(i, j) * w[static_cast<std::size_t>(j)];
    acc += v[static_cast<std::size_t>(i)] * row;
  }
  return acc;
}

Complex pairing_complex(const IntegralLattice& lat, std::span<const Complex> x,
                        std::span<const Complex> y) {
  const int n = lat.rank();
  if (static_cast<int>(x.size()) != n || static_cast<int>(y.size()) != n)
    throw ValidationError("pairing_complex: vector length does not match rank");
  Complex acc = 0.0;
  for (int i = 0; i < n; ++i) {
    if (x[static_cast<std::size_t>(i)] == 0.0) continue;
    Complex row = 0.0;
    for (int j = 0; j < n; ++j)
      row += static_cast<double>(lat(i, j)) * y[static_cast<std::size_t>(j)];
    acc += x[static_cast<std::size_t>(i)] * row;
  }
  return acc;
}

PeriodPoint::PeriodPoint(std::vector<Complex> omega) : omega_(std::move(omega)) {
  if (omega_.size() != 22) throw ValidationError("PeriodPoint: expected 22 coordinates");
  std::size_t arg = 0;
  double best = 0.0;
  for (std::size_t i = 0; i < omega_.size(); ++i) {
    const double a = std::abs(omega_[i]);
    if (!std::isfinite(a)) throw ValidationError("PeriodPoint: non-finite coordinate");
    if (a > best) {
      best = a;
      arg = i;
    }
  }
  if (best == 0.0) throw ValidationError("PeriodPoint: zero vector");
  const Complex pivot = omega_[arg];
  for (Complex& c : omega_) c /= pivot;
}

bool is_on_period_quadric(const PeriodPoint& omega, double tol, bool require_positivity) {
  const IntegralLattice l = k3_lattice();
  const auto& w = omega.coords();
  const Complex q = pairing_complex(l, w, w);
  double scale = 0.0;
  for (int i = 0; i < 22; ++i)
    for (int j = 0; j < 22; ++j)
      scale += std::abs(static_cast<double>(l(i, j))) * std::abs(w[static_cast<std::size_t>(i)]) *
               std::abs(w[static_cast<std::size_t>(j)]);
  if (std::abs(q) > tol * scale) return false;
  if (require_positivity) {
    double pos = 0.0;
    for (int i = 0; i < 22; ++i)
      for (int j = 0; j < 22; ++j)
        pos += static_cast<double>(l(i, j)) *
               std::real(w[static_cast<std::size_t>(i)] * std::conj(w[static_cast<std::size_t>(j)]));
    if (!(pos > 0.0)) return false;
  }
  return true;
}

namespace {

BigInt div_round_nearest(const BigInt& a, const BigInt& b) {
  BigInt q = a / b;
  const BigInt r = a - q * b;
  if (2 * abs(r) > abs(b)) q += (a < 0) == (b < 0) ? 1 : -1;
  return q;
}

// Kernel of an r x n integer matrix as a basis of the integer solution
// lattice: column echelon with a tracked unimodular transform.
std::vector<std::vector<BigInt>> integer_kernel(std::vector<std::vector<BigInt>> a, int n) {
  const int r = static_cast<int>(a.size());
  std::vector<std::vector<BigInt>> u(static_cast<std::size_t>(n),
                                     std::vector<BigInt>(static_cast<std::size_t>(n), 0));
  for (int i = 0; i < n; ++i) u[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1;

  auto col_sub = [&](int dst, int src, const BigInt& q) {
    for (int i = 0; i < r; ++i)
      a[static_cast<std::size_t>(i)][static_cast<std::size_t>(dst)] -=
          q * a[static_cast<std::size_t>(i)][static_cast<std::size_t>(src)];
    for (int i = 0; i < n; ++i)
      u[static_cast<std::size_t>(i)][static_cast<std::size_t>(dst)] -=
          q * u[static_cast<std::size_t>(i)][static_cast<std::size_t>(src)];
  };
  auto col_swap = [&](int x, int y) {
    if (x == y) return;
    for (int i = 0; i < r; ++i)
      std::swap(a[static_cast<std::size_t>(i)][static_cast<std::size_t>(x)],
                a[static_cast<std::size_t>(i)][static_cast<std::size_t>(y)]);
    for (int i = 0; i < n; ++i)
      std::swap(u[static_cast<std::size_t>(i)][static_cast<std::size_t>(x)],
                u[static_cast<std::size_t>(i)][static_cast<std::size_t>(y)]);
  };

  int col = 0;
  for (int row = 0; row < r && col < n; ++row) {
    // Euclid across the remaining columns until one nonzero entry survives
    while (true) {
      int piv = -1;
      for (int j = col; j < n; ++j) {
        const BigInt& v = a[static_cast<std::size_t>(row)][static_cast<std::size_t>(j)];
        if (v != 0 && (piv < 0 || abs(v) < abs(a[static_cast<std::size_t>(row)][static_cast<std::size_t>(piv)])))
          piv = j;
      }
      if (piv < 0) break;
      col_swap(col, piv);
      bool clean = true;
      for (int j = col + 1; j < n; ++j) {
        const BigInt& v = a[static_cast<std::size_t>(row)][static_cast<std::size_t>(j)];
        if (v == 0) continue;
        const BigInt q = div_round_nearest(v, a[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)]);
        col_sub(j, col, q);
        if (a[static_cast<std::size_t>(row)][static_cast<std::size_t>(j)] != 0) clean = false;
      }
      if (clean) {
        ++col;
        break;
      }
    }
  }

  std::vector<std::vector<BigInt>> kernel;
  for (int j = col; j < n; ++j) {
    std::vector<BigInt> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = u[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    kernel.push_back(std::move(v));
  }
  return kernel;
}

std::optional<std::pair<long long, long long>> rationalize(double x, long long max_den,
                                                           double tol_abs) {
  if (!std::isfinite(x)) return std::nullopt;
  // continued-fraction convergents p/q until |x - p/q| <= tol_abs
  long long p0 = 0, q0 = 1;  // h_{-2}, k_{-2}
  long long p1 = 1, q1 = 0;  // h_{-1}, k_{-1}
  double xi = x;
  long long p = 0, q = 1;
  for (int iter = 0; iter < 64; ++iter) {
    const double fl = std::floor(xi);
    if (fl > 9e17 || fl < -9e17) return std::nullopt;
    const long long ai = static_cast<long long>(fl);
    p = ai * p1 + p0;
    q = ai * q1 + q0;
    if (q > max_den || q < 0) return std::nullopt;
    if (std::abs(x - static_cast<double>(p) / static_cast<double>(q)) <= tol_abs)
      return std::make_pair(p, q);
    p0 = p1; q0 = q1; p1 = p; q1 = q;
    const double frac = xi - fl;
    if (frac < 1e-18) return std::nullopt;
    xi = 1.0 / frac;
  }
  return std::nullopt;
}

long long checked_ll(const BigInt& v) {
  if (v > BigInt(std::numeric_limits<long long>::max()) ||
      v < BigInt(std::numeric_limits<long long>::min()))
    throw NumericError("lattice: integer overflow converting exact result");
  return static_cast<long long>(v);
}

// Plain LLL (delta = 0.99) on integer row vectors seen through an embedding
// into R^dim.  Row operations are exact on the integer parts.
void lll_reduce(std::vector<IntVector>& rows,
                const std::function<std::vector<double>(const IntVector&)>& embed) {
  const int k_rows = static_cast<int>(rows.size());
  if (k_rows < 2) return;
  const double delta = 0.99;

  auto dot = [](const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
  };

  std::vector<std::vector<double>> b(rows.size());
  auto refresh = [&](int i) { b[static_cast<std::size_t>(i)] = embed(rows[static_cast<std::size_t>(i)]); };
  for (int i = 0; i < k_rows; ++i) refresh(i);

  std::vector<std::vector<double>> gso;
  std::vector<std::vector<double>> mu;
  std::vector<double> norm2;
  auto recompute = [&]() {
    gso.assign(b.begin(), b.end());
    mu.assign(rows.size(), std::vector<double>(rows.size(), 0.0));
    norm2.assign(rows.size(), 0.0);
    for (int i = 0; i < k_rows; ++i) {
      for (int j = 0; j < i; ++j) {
        const double denom = norm2[static_cast<std::size_t>(j)];
        const double m = denom > 0.0 ? dot(b[static_cast<std::size_t>(i)], gso[static_cast<std::size_t>(j)]) / denom : 0.0;
        mu[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = m;
        for (std::size_t r = 0; r < gso[static_cast<std::size_t>(i)].size(); ++r)
          gso[static_cast<std::size_t>(i)][r] -= m * gso[static_cast<std::size_t>(j)][r];
      }
      norm2[static_cast<std::size_t>(i)] = dot(gso[static_cast<std::size_t>(i)], gso[static_cast<std::size_t>(i)]);
    }
  };
  recompute();

  int k = 1;
  int guard = 0;
  const int guard_max = 20000;
  while (k < k_rows && guard++ < guard_max) {
    for (int j = k - 1; j >= 0; --j) {
      const double m = mu[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)];
      if (std::abs(m) > 0.5) {
        if (std::abs(m) > 1e12) throw NumericError("lll_reduce: reduction coefficient overflow");
        const long long q = static_cast<long long>(std::llround(m));
        for (std::size_t r = 0; r < rows[static_cast<std::size_t>(k)].size(); ++r)
          rows[static_cast<std::size_t>(k)][r] -= q * rows[static_cast<std::size_t>(j)][r];
        refresh(k);
        recompute();
      }
    }
    const double lhs = norm2[static_cast<std::size_t>(k)];
    const double rhs = (delta - mu[static_cast<std::size_t>(k)][static_cast<std::size_t>(k - 1)] *
                                    mu[static_cast<std::size_t>(k)][static_cast<std::size_t>(k - 1)]) *
                       norm2[static_cast<std::size_t>(k - 1)];
    if (lhs >= rhs) {
      ++k;
    } else {
      std::swap(rows[static_cast<std::size_t>(k)], rows[static_cast<std::size_t>(k - 1)]);
      refresh(k);
      refresh(k - 1);
      recompute();
      k = std::max(k - 1, 1);
    }
  }
}

IntegralLattice induced_gram(const IntegralLattice& ambient, const std::vector<IntVector>& basis) {
  const int k = static_cast<int>(basis.size());
  std::vector<long long> g(static_cast<std::size_t>(k) * static_cast<std::size_t>(k), 0);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      g[static_cast<std::size_t>(i) * static_cast<std::size_t>(k) + static_cast<std::size_t>(j)] =
          pairing(ambient, basis[static_cast<std::size_t>(i)], basis[static_cast<std::size_t>(j)]);
  return IntegralLattice(k, std::move(g));
}

// Rank-filter rows over Q, keeping the earliest independent ones.  Exact.
std::vector<IntVector> independent_rows(const std::vector<IntVector>& rows, int n) {
  std::vector<std::vector<BigRat>> echelon;
  std::vector<IntVector> kept;
  for (const IntVector& row : rows) {
    std::vector<BigRat> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = row[static_cast<std::size_t>(i)];
    for (const auto& e : echelon) {
      int piv = -1;
      for (int i = 0; i < n; ++i)
        if (e[static_cast<std::size_t>(i)] != 0) {
          piv = i;
          break;
        }
      if (piv < 0) continue;
      const BigRat f = v[static_cast<std::size_t>(piv)] / e[static_cast<std::size_t>(piv)];
      if (f != 0)
        for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] -= f * e[static_cast<std::size_t>(i)];
    }
    bool nonzero = false;
    for (int i = 0; i < n; ++i)
      if (v[static_cast<std::size_t>(i)] != 0) {
        nonzero = true;
        break;
      }
    if (nonzero) {
      echelon.push_back(std::move(v));
      kept.push_back(row);
    }
  }
  return kept;
}

}  // namespace

NeronSeveri neron_severi(const PeriodPoint& omega, double tol) {
  if (!(tol > 0.0)) throw ValidationError("neron_severi: tolerance must be positive");
  const IntegralLattice l = k3_lattice();
  const int n = 22;
  const auto& w = omega.coords();

  std::vector<double> re(n), im(n);
  for (int i = 0; i < n; ++i) {
    re[static_cast<std::size_t>(i)] = std::real(w[static_cast<std::size_t>(i)]);
    im[static_cast<std::size_t>(i)] = std::imag(w[static_cast<std::size_t>(i)]);
  }
  // constraint functionals r1 = G * re, r2 = G * im
  std::vector<double> r1(n, 0.0), r2(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      r1[static_cast<std::size_t>(i)] += static_cast<double>(l(i, j)) * re[static_cast<std::size_t>(j)];
      r2[static_cast<std::size_t>(i)] += static_cast<double>(l(i, j)) * im[static_cast<std::size_t>(j)];
    }

  // Exact route: all coordinates admit small rational readings.
  std::vector<std::pair<long long, long long>> re_rat(static_cast<std::size_t>(n)),
      im_rat(static_cast<std::size_t>(n));
  bool exact = true;
  for (int i = 0; i < n && exact; ++i) {
    const auto a = rationalize(re[static_cast<std::size_t>(i)], 1000000,
                               1e-12 * (1.0 + std::abs(re[static_cast<std::size_t>(i)])));
    const auto b = rationalize(im[static_cast<std::size_t>(i)], 1000000,
                               1e-12 * (1.0 + std::abs(im[static_cast<std::size_t>(i)])));
    if (!a || !b) {
      exact = false;
      break;
    }
    re_rat[static_cast<std::size_t>(i)] = *a;
    im_rat[static_cast<std::size_t>(i)] = *b;
  }

  std::vector<IntVector> basis;
  if (exact) {
    // clear denominators row-wise on the exact constraint rows G*re, G*im
    std::vector<std::vector<BigInt>> a(2, std::vector<BigInt>(static_cast<std::size_t>(n), 0));
    for (int which = 0; which < 2; ++which) {
      const auto& rat = which == 0 ? re_rat : im_rat;
      BigInt lcm_den = 1;
      for (int i = 0; i < n; ++i) {
        const BigInt d = rat[static_cast<std::size_t>(i)].second;
        lcm_den = boost::multiprecision::lcm(lcm_den, d);
      }
      for (int i = 0; i < n; ++i) {
        BigInt acc = 0;
        for (int j = 0; j < n; ++j) {
          const BigInt num = rat[static_cast<std::size_t>(j)].first;
          const BigInt den = rat[static_cast<std::size_t>(j)].second;
          acc += BigInt(l(i, j)) * num * (lcm_den / den);
        }
        a[static_cast<std::size_t>(which)][static_cast<std::size_t>(i)] = acc;
      }
    }
    const auto kernel = integer_kernel(std::move(a), n);
    for (const auto& v : kernel) {
      IntVector row(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) row[static_cast<std::size_t>(i)] = checked_ll(v[static_cast<std::size_t>(i)]);
      basis.push_back(std::move(row));
    }
    // tidy the basis: short vectors, deterministic
    lll_reduce(basis, [n](const IntVector& v) {
      std::vector<double> d(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) d[static_cast<std::size_t>(i)] = static_cast<double>(v[static_cast<std::size_t>(i)]);
      return d;
    });
  } else {
    // Relation search: LLL on (v, C <v,Re w>, C <v,Im w>), then certify each
    // candidate against the floating constraints.
    const double big = 1.0 / tol;
    std::vector<IntVector> rows;
    for (int i = 0; i < n; ++i) {
      IntVector e(static_cast<std::size_t>(n), 0);
      e[static_cast<std::size_t>(i)] = 1;
      rows.push_back(std::move(e));
    }
    auto embed = [&](const IntVector& v) {
      std::vector<double> d(static_cast<std::size_t>(n) + 2);
      double s1 = 0.0, s2 = 0.0;
      for (int i = 0; i < n; ++i) {
        d[static_cast<std::size_t>(i)] = static_cast<double>(v[static_cast<std::size_t>(i)]);
        s1 += static_cast<double>(v[static_cast<std::size_t>(i)]) * r1[static_cast<std::size_t>(i)];
        s2 += static_cast<double>(v[static_cast<std::size_t>(i)]) * r2[static_cast<std::size_t>(i)];
      }
      d[static_cast<std::size_t>(n)] = big * s1;
      d[static_cast<std::size_t>(n) + 1] = big * s2;
      return d;
    };
    lll_reduce(rows, embed);

    std::vector<IntVector> accepted;
    for (const IntVector& v : rows) {
      double s1 = 0.0, s2 = 0.0;
      long long height = 0;
      for (int i = 0; i < n; ++i) {
        s1 += static_cast<double>(v[static_cast<std::size_t>(i)]) * r1[static_cast<std::size_t>(i)];
        s2 += static_cast<double>(v[static_cast<std::size_t>(i)]) * r2[static_cast<std::size_t>(i)];
        height = std::max(height, std::llabs(v[static_cast<std::size_t>(i)]));
      }
      if (height == 0 || height > 1000000) continue;
      if (std::abs(s1) <= tol && std::abs(s2) <= tol) accepted.push_back(v);
    }
    basis = independent_rows(accepted, n);
  }

  IntegralLattice gram = induced_gram(l, basis);
  return NeronSeveri{std::move(basis), std::move(gram)};
}

bool in_span(const std::vector<IntVector>& basis, const IntVector& v) {
  if (basis.empty()) return std::all_of(v.begin(), v.end(), [](long long x) { return x == 0; });
  const int n = static_cast<int>(v.size());
  const int k = static_cast<int>(basis.size());
  // solve  sum_i x_i basis_i = v  over Q, then check integrality
  std::vector<std::vector<BigRat>> m(static_cast<std::size_t>(n),
                                     std::vector<BigRat>(static_cast<std::size_t>(k) + 1));
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < k; ++c)
      m[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] =
          basis[static_cast<std::size_t>(c)][static_cast<std::size_t>(r)];
    m[static_cast<std::size_t>(r)][static_cast<std::size_t>(k)] = v[static_cast<std::size_t>(r)];
  }
  // Gaussian elimination
  int row = 0;
  std::vector<int> pivot_col;
  for (int c = 0; c < k && row < n; ++c) {
    int pr = -1;
    for (int r = row; r < n; ++r)
      if (m[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] != 0) {
        pr = r;
        break;
      }
    if (pr < 0) continue;
    std::swap(m[static_cast<std::size_t>(row)], m[static_cast<std::size_t>(pr)]);
    const BigRat p = m[static_cast<std::size_t>(row)][static_cast<std::size_t>(c)];
    for (int r = 0; r < n; ++r) {
      if (r == row) continue;
      const BigRat f = m[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] / p;
      if (f == 0) continue;
      for (int cc = c; cc <= k; ++cc)
        m[static_cast<std::size_t>(r)][static_cast<std::size_t>(cc)] -=
            f * m[static_cast<std::size_t>(row)][static_cast<std::size_t>(cc)];
    }
    pivot_col.push_back(c);
    ++row;
  }
  // consistency: zero rows must have zero rhs
  for (int r = row; r < n; ++r)
    if (m[static_cast<std::size_t>(r)][static_cast<std::size_t>(k)] != 0) return false;
  // integrality of the solved coefficients
  for (int i = 0; i < row; ++i) {
    const BigRat x = m[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] /
                     m[static_cast<std::size_t>(i)][static_cast<std::size_t>(pivot_col[static_cast<std::size_t>(i)])];
    if (denominator(x) != 1) return false;
  }
  return true;
}

namespace {

long long gcd_ll(long long a, long long b) {
  a = std::llabs(a);
  b = std::llabs(b);
  while (b) {
    const long long t = a % b;
    a = b;
    b = t;
  }
  return a;
}

// extended gcd: returns g and (x, y) with a x + b y = g
long long egcd(long long a, long long b, long long& x, long long& y) {
  if (b == 0) {
    x = (a >= 0) ? 1 : -1;
    y = 0;
    return std::llabs(a);
  }
  long long x1, y1;
  const long long g = egcd(b, a % b, x1, y1);
  x = y1;
  y = x1 - (a / b) * y1;
  return g;
}

// solve sum w_i f_i = 1 over the integers (requires gcd(w) = 1)
std::optional<IntVector> solve_unit_functional(const IntVector& w) {
  const int n = static_cast<int>(w.size());
  IntVector f(static_cast<std::size_t>(n), 0);
  long long g = 0;
  for (int i = 0; i < n; ++i) {
    const long long wi = w[static_cast<std::size_t>(i)];
    if (wi == 0) continue;
    if (g == 0) {
      // first nonzero: g = |wi|, f_i = sign
      f.assign(static_cast<std::size_t>(n), 0);
      f[static_cast<std::size_t>(i)] = wi > 0 ? 1 : -1;
      g = std::llabs(wi);
    } else {
      long long x, y;
      const long long g2 = egcd(g, wi, x, y);
      for (long long& c : f) c *= x;
      f[static_cast<std::size_t>(i)] = y;
      g = g2;
    }
    if (g == 1) break;
  }
  if (g != 1) return std::nullopt;
  return f;
}

}  // namespace

HyperbolicPlaneSearch contains_hyperbolic_plane(const IntegralLattice& lat, int search_bound) {
  const int n = lat.rank();
  if (search_bound < 1) throw ValidationError("contains_hyperbolic_plane: bound must be >= 1");
  if (n < 2)
    return {HyperbolicPlaneSearch::Status::rank_obstruction, std::nullopt, search_bound};
  const Inertia in = inertia_exact(lat);
  if (in.positive == 0 || in.negative == 0)
    return {HyperbolicPlaneSearch::Status::definiteness_obstruction, std::nullopt, search_bound};

  auto self_pairing = [&](const IntVector& v) { return pairing(lat, v, v); };

  auto try_isotropic = [&](const IntVector& e) -> std::optional<std::pair<IntVector, IntVector>> {
    IntVector w(static_cast<std::size_t>(n), 0);
    bool any = false;
    for (int i = 0; i < n; ++i) {
      long long acc = 0;
      for (int j = 0; j < n; ++j) acc += lat(i, j) * e[static_cast<std::size_t>(j)];
      w[static_cast<std::size_t>(i)] = acc;
      any = any || acc != 0;
    }
    if (!any) return std::nullopt;  // radical vector, cannot pair to 1
    long long g = 0;
    for (const long long wi : w) g = gcd_ll(g, wi);
    if (g != 1) return std::nullopt;
    auto f0 = solve_unit_functional(w);
    if (!f0) return std::nullopt;
    long long q0 = self_pairing(*f0);
    if (q0 % 2 != 0) {
      // parity fix: some unit vector orthogonal to e with odd square
      bool fixed = false;
      for (int m = 0; m < n && !fixed; ++m) {
        if (w[static_cast<std::size_t>(m)] != 0) continue;
        if (lat(m, m) % 2 == 0) continue;
        (*f0)[static_cast<std::size_t>(m)] += 1;
        q0 = self_pairing(*f0);
        fixed = true;
      }
      if (!fixed) return std::nullopt;
    }
    IntVector f = *f0;
    const long long k = -q0 / 2;
    for (int i = 0; i < n; ++i) f[static_cast<std::size_t>(i)] += k * e[static_cast<std::size_t>(i)];
    if (self_pairing(f) != 0) return std::nullopt;
    if (pairing(lat, e, f) != 1) return std::nullopt;
    return std::make_pair(e, f);
  };

  std::vector<IntVector> candidates;
  auto push_candidate = [&](IntVector v) {
    long long g = 0;
    for (const long long x : v) g = gcd_ll(g, x);
    if (g != 1) return;
    if (self_pairing(v) != 0) return;
    candidates.push_back(std::move(v));
  };

  const int b = search_bound;
  // supports of size 1
  for (int i = 0; i < n; ++i) {
    IntVector v(static_cast<std::size_t>(n), 0);
    v[static_cast<std::size_t>(i)] = 1;
    push_candidate(std::move(v));
  }
  // supports of size 2
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (long long p = 1; p <= b; ++p)
        for (long long q = -b; q <= b; ++q) {
          if (q == 0) continue;
          IntVector v(static_cast<std::size_t>(n), 0);
          v[static_cast<std::size_t>(i)] = p;
          v[static_cast<std::size_t>(j)] = q;
          push_candidate(std::move(v));
        }
  // supports of size 3
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k)
        for (long long p = 1; p <= b; ++p)
          for (long long q = -b; q <= b; ++q)
            for (long long s = -b; s <= b; ++s) {
              if (q == 0 || s == 0) continue;
              IntVector v(static_cast<std::size_t>(n), 0);
              v[static_cast<std::size_t>(i)] = p;
              v[static_cast<std::size_t>(j)] = q;
              v[static_cast<std::size_t>(k)] = s;
              push_candidate(std::move(v));
            }
  // full box on small ranks
  if (n <= 4) {
    IntVector v(static_cast<std::size_t>(n), -b);
    while (true) {
      int first_nonzero = -1;
      for (int i = 0; i < n; ++i)
        if (v[static_cast<std::size_t>(i)] != 0) {
          first_nonzero = i;
          break;
        }
      if (first_nonzero >= 0 && v[static_cast<std::size_t>(first_nonzero)] > 0)
        push_candidate(v);
      int idx = n - 1;
      while (idx >= 0 && v[static_cast<std::size_t>(idx)] == b) {
        v[static_cast<std::size_t>(idx)] = -b;
        --idx;
      }
      if (idx < 0) break;
      v[static_cast<std::size_t>(idx)] += 1;
    }
  }

  for (const IntVector& e : candidates)
    if (auto hit = try_isotropic(e))
      return {HyperbolicPlaneSearch::Status::found, std::move(hit), search_bound};
  return {HyperbolicPlaneSearch::Status::not_found_up_to_bound, std::nullopt, search_bound};
}

}  // namespace k3e
