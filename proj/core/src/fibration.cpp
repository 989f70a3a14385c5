#include "k3e/fibration.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "k3e/errors.hpp"

namespace k3e {

namespace {
constexpr double kRegularityMargin = 1e-6;  // chordal distance to S_X
}

Chart chart_of(const P1Point& p) {
  return std::abs(p.s()) >= std::abs(p.t()) ? Chart::s_one : Chart::t_one;
}

Complex chart_coord(const P1Point& p) {
  return chart_of(p) == Chart::s_one ? p.t() / p.s() : p.s() / p.t();
}

WeierstrassFibration::WeierstrassFibration(BinaryForm g2, BinaryForm g3)
    : g2_(std::move(g2)), g3_(std::move(g3)), delta_(discriminant_form(g2_, g3_)) {
  // discriminant_form enforces the degrees 8 and 12
  if (delta_.is_zero(1e-12 * std::max(std::pow(g2_.norm_inf(), 3.0),
                                      std::pow(g3_.norm_inf(), 2.0))))
    throw ValidationError("WeierstrassFibration: discriminant vanishes identically (no smooth fibers)");
  singular_locus_ = roots(delta_);
}

RegularityReport is_regular(const WeierstrassFibration& x, const P1Point& t) {
  double dist = 1.0;  // chordal distances never exceed 1
  for (const RootOnP1& r : x.singular_locus())
    dist = std::min(dist, chordal_distance(t, r.point));
  return {dist > kRegularityMargin, dist};
}

WeierstrassFibration rescale(const WeierstrassFibration& x, Complex lambda) {
  if (lambda == 0.0) throw ValidationError("rescale: lambda must be nonzero");
  const Complex l2 = lambda * lambda;
  const Complex l4 = l2 * l2;
  const Complex l6 = l4 * l2;
  return WeierstrassFibration(scale(x.g2(), l4), scale(x.g3(), l6));
}

namespace {

// Taylor shift by the synthetic-division cascade: coefficients of f(c + u).
std::vector<Complex> shifted_coefficients(std::vector<Complex> a, Complex c) {
  const int n = static_cast<int>(a.size());
  for (int k = 0; k < n; ++k)
    for (int i = n - 2; i >= k; --i)
      a[static_cast<std::size_t>(i)] += c * a[static_cast<std::size_t>(i + 1)];
  return a;
}

// Vanishing order of a form at a point, in the chart where the point's
// affine coordinate has modulus <= 1.
int vanishing_order(const BinaryForm& f, const P1Point& p, int cap) {
  std::vector<Complex> affine;
  Complex c;
  if (chart_of(p) == Chart::s_one) {
    affine = f.coeffs();
    c = p.t() / p.s();
  } else {
    affine.assign(f.coeffs().rbegin(), f.coeffs().rend());
    c = p.s() / p.t();
  }
  const std::vector<Complex> sh = shifted_coefficients(affine, c);
  double norm = 0.0;
  for (const Complex& v : sh) norm = std::max(norm, std::abs(v));
  if (norm == 0.0) return cap;
  for (int k = 0; k < static_cast<int>(sh.size()) && k <= cap; ++k)
    if (std::abs(sh[static_cast<std::size_t>(k)]) > 1e-8 * norm) return k;
  return cap;
}

}  // namespace

std::string KodairaLabel::name() const {
  switch (kind) {
    case Kind::smooth: return "smooth";
    case Kind::i_n: return "I" + std::to_string(n);
    case Kind::ii: return "II";
    case Kind::iii: return "III";
    case Kind::iv: return "IV";
    case Kind::i0_star: return "I0*";
    case Kind::in_star: return "I" + std::to_string(n) + "*";
    case Kind::iv_star: return "IV*";
    case Kind::iii_star: return "III*";
    case Kind::ii_star: return "II*";
  }
  return "?";
}

KodairaLabel kodaira_type(const WeierstrassFibration& x, const P1Point& p) {
  // c comes from the clustered singular locus, a and b from shifted
  // coefficient arrays
  int c = 0;
  for (const RootOnP1& r : x.singular_locus())
    if (chordal_distance(p, r.point) <= kRegularityMargin) {
      c = r.multiplicity;
      break;
    }
  if (c == 0) return {KodairaLabel::Kind::smooth, 0, 0, 0, 0};

  const int a = vanishing_order(x.g2(), p, 8);
  const int b = vanishing_order(x.g3(), p, 12);
  const auto label = [&](KodairaLabel::Kind kind, int n) {
    return KodairaLabel{kind, n, a, b, c};
  };

  if (a >= 4 && b >= 6)
    throw ValidationError("kodaira_type: non-minimal Weierstrass data at this point");
  if (a == 0 && b == 0) return label(KodairaLabel::Kind::i_n, c);
  if (a >= 1 && b == 1 && c == 2) return label(KodairaLabel::Kind::ii, 0);
  if (a == 1 && b >= 2 && c == 3) return label(KodairaLabel::Kind::iii, 0);
  if (a >= 2 && b == 2 && c == 4) return label(KodairaLabel::Kind::iv, 0);
  if (a >= 2 && b >= 3 && c == 6) return label(KodairaLabel::Kind::i0_star, 0);
  if (a == 2 && b == 3 && c >= 7) return label(KodairaLabel::Kind::in_star, c - 6);
  if (a >= 3 && b == 4 && c == 8) return label(KodairaLabel::Kind::iv_star, 0);
  if (a == 3 && b >= 5 && c == 9) return label(KodairaLabel::Kind::iii_star, 0);
  if (a >= 4 && b == 5 && c == 10) return label(KodairaLabel::Kind::ii_star, 0);
  throw NumericError("kodaira_type: vanishing orders (" + std::to_string(a) + "," +
                     std::to_string(b) + "," + std::to_string(c) +
                     ") match no row of the classification table");
}

std::string kodaira_table_json() {
  // kept in lookup order; "n" ranges over positive integers
  return R"({
  "version": "1",
  "key": ["ord_g2", "ord_g3", "ord_delta"],
  "rows": [
    {"label": "I_n",  "ord_g2": "0",  "ord_g3": "0",  "ord_delta": "n"},
    {"label": "II",   "ord_g2": ">=1", "ord_g3": "1",  "ord_delta": "2"},
    {"label": "III",  "ord_g2": "1",  "ord_g3": ">=2", "ord_delta": "3"},
    {"label": "IV",   "ord_g2": ">=2", "ord_g3": "2",  "ord_delta": "4"},
    {"label": "I0*",  "ord_g2": ">=2", "ord_g3": ">=3", "ord_delta": "6"},
    {"label": "I_n*", "ord_g2": "2",  "ord_g3": "3",  "ord_delta": "6+n"},
    {"label": "IV*",  "ord_g2": ">=3", "ord_g3": "4",  "ord_delta": "8"},
    {"label": "III*", "ord_g2": "3",  "ord_g3": ">=5", "ord_delta": "9"},
    {"label": "II*",  "ord_g2": ">=4", "ord_g3": "5",  "ord_delta": "10"},
    {"label": "non-minimal", "ord_g2": ">=4", "ord_g3": ">=6", "ord_delta": "-"}
  ]
})";
}

CurveCoefficients fiber_curve_in_chart(const WeierstrassFibration& x, Chart chart,
                                       Complex coord) {
  if (chart == Chart::s_one)
    return {x.g2().eval_affine(coord), x.g3().eval_affine(coord)};
  return {x.g2().eval_coaffine(coord), x.g3().eval_coaffine(coord)};
}

CurveCoefficients fiber_curve(const WeierstrassFibration& x, const P1Point& t) {
  const RegularityReport r = is_regular(x, t);
  if (!r.regular)
    throw ValidationError("fiber_curve: t lies on (or too close to) the singular locus");
  return fiber_curve_in_chart(x, chart_of(t), chart_coord(t));
}

FiberPoint::FiberPoint(Complex x, Complex y, Complex z) : v_{x, y, z} {
  double best = 0.0;
  std::size_t arg = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    const double a = std::abs(v_[i]);
    if (!std::isfinite(a)) throw ValidationError("FiberPoint: non-finite coordinate");
    if (a > best) {
      best = a;
      arg = i;
    }
  }
  if (best == 0.0) throw ValidationError("FiberPoint: all coordinates zero");
  const Complex pivot = v_[arg];
  for (Complex& c : v_) c /= pivot;
}

bool FiberPoint::is_section() const { return v_[2] == 0.0 && v_[0] == 0.0; }

FiberPoint uniformize(const WeierstrassFibration& x, Complex z, const P1Point& t,
                      double tol) {
  const CurveCoefficients c = fiber_curve(x, t);
  const PeriodLattice lat = period_lattice(c);
  try {
    const auto [p, dp] = wp_pair(z, lat, tol);
    return FiberPoint(p, dp, 1.0);
  } catch (const PoleSignal&) {
    return FiberPoint(0.0, 1.0, 0.0);
  }
}

JacobianF jacobian_f(const WeierstrassFibration& x, Complex z, const P1Point& t,
                     double h) {
  if (h == 0.0) h = 1e-5 * (1.0 + std::abs(z));
  if (!(h > 0.0)) throw ValidationError("jacobian_f: step must be positive");
  const RegularityReport reg = is_regular(x, t);
  if (!reg.regular) throw ValidationError("jacobian_f: t on the singular locus");
  if (reg.chordal_distance <= 2.0 * h)
    throw ValidationError("jacobian_f: t within 2h of the singular locus");

  const Chart chart = chart_of(t);
  const Complex tc = chart_coord(t);
  const CurveCoefficients c0 = fiber_curve_in_chart(x, chart, tc);
  const PeriodLattice lat0 = period_lattice(c0);

  Complex p0, dp0;
  try {
    std::tie(p0, dp0) = wp_pair(z, lat0);
  } catch (const PoleSignal&) {
    throw ValidationError("jacobian_f: z maps to the section point");
  }

  auto wp_at = [&](Complex zz, Complex tt) {
    const CurveCoefficients cc = fiber_curve_in_chart(x, chart, tt);
    return wp_pair(zz, period_lattice(cc));
  };

  // z-column by central differences, cross-checked against the closed form
  const auto [p_zp, dp_zp] = wp_at(z + h, tc);
  const auto [p_zm, dp_zm] = wp_at(z - h, tc);
  const Complex dx_dz = (p_zp - p_zm) / (2.0 * h);
  const Complex dy_dz = (dp_zp - dp_zm) / (2.0 * h);

  const Complex wp2 = 6.0 * p0 * p0 - 0.5 * c0.g2;  // wp'' closed form
  const double scale_x = 1.0 + std::abs(dp0);
  const double scale_y = 1.0 + std::abs(wp2);
  if (std::abs(dx_dz - dp0) / scale_x > 1e-4 || std::abs(dy_dz - wp2) / scale_y > 1e-4)
    throw NumericError("jacobian_f: finite differences disagree with the closed form");

  const auto [p_tp, dp_tp] = wp_at(z, tc + h);
  const auto [p_tm, dp_tm] = wp_at(z, tc - h);
  const Complex dx_dt = (p_tp - p_tm) / (2.0 * h);
  const Complex dy_dt = (dp_tp - dp_tm) / (2.0 * h);

  JacobianF out;
  out.rows[0] = {dx_dz, dy_dz, 0.0};
  out.rows[1] = {dx_dt, dy_dt, 0.0};
  out.chart = chart;
  out.t_coord = tc;
  out.step = h;
  return out;
}

WeierstrassFibration random_fibration(std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int attempt = 0; attempt < 64; ++attempt) {
    std::vector<Complex> c2(9), c3(13);
    for (Complex& v : c2) v = Complex(gauss(rng), gauss(rng));
    for (Complex& v : c3) v = Complex(gauss(rng), gauss(rng));
    try {
      return WeierstrassFibration(BinaryForm(8, c2), BinaryForm(12, c3));
    } catch (const ValidationError&) {
      continue;  // vanishing discriminant; resample
    }
  }
  throw NumericError("random_fibration: repeated degenerate samples");
}

}  // namespace k3e
