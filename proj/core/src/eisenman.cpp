#include "k3e/eisenman.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <sstream>

#include "k3e/errors.hpp"

namespace k3e {

Complex metric_pairing(const MetricSpec& m, const TargetPoint& at, const Tangent& v,
                       const Tangent& w) {
  if (v.size() != w.size() || v.size() != at.size())
    throw ValidationError("metric_pairing: dimension mismatch");
  switch (m.kind) {
    case MetricSpec::Kind::euclidean: {
      Complex acc = 0.0;
      for (std::size_t i = 0; i < v.size(); ++i) acc += v[i] * std::conj(w[i]);
      return m.scale * acc;
    }
    case MetricSpec::Kind::fiber_fs: {
      if (at.size() != 3)
        throw ValidationError("metric_pairing: fiber_fs expects (x, y, t) coordinates");
      const Complex x = at[0], y = at[1], t = at[2];
      const double q = 1.0 + std::norm(x) + std::norm(y);
      const Complex vw = v[0] * std::conj(w[0]) + v[1] * std::conj(w[1]);
      const Complex va = v[0] * std::conj(x) + v[1] * std::conj(y);
      const Complex aw = x * std::conj(w[0]) + y * std::conj(w[1]);
      const Complex fs = (q * vw - va * aw) / (q * q);
      const double base = 1.0 + std::norm(t);
      const Complex chordal = v[2] * std::conj(w[2]) / (base * base);
      return m.scale * (fs + chordal);
    }
  }
  throw ValidationError("metric_pairing: unknown metric kind");
}

double pvector_norm(const MetricSpec& m, const TargetPoint& at,
                    const std::vector<Tangent>& vs) {
  if (vs.empty() || vs.size() > 2)
    throw ValidationError("pvector_norm: only p = 1 and p = 2 are supported");
  if (vs.size() == 1) {
    const double n2 = std::real(metric_pairing(m, at, vs[0], vs[0]));
    return std::sqrt(std::max(n2, 0.0));
  }
  const Complex g11 = metric_pairing(m, at, vs[0], vs[0]);
  const Complex g22 = metric_pairing(m, at, vs[1], vs[1]);
  const Complex g12 = metric_pairing(m, at, vs[0], vs[1]);
  const double det = std::real(g11) * std::real(g22) - std::norm(g12);
  return std::sqrt(std::max(det, 0.0));
}

double TestMap::holomorphy_residual(const std::array<Complex, 2>& at) const {
  double worst = 0.0;
  for (int axis = 0; axis < p; ++axis) {
    const double h = fd_step[static_cast<std::size_t>(axis)];
    auto shifted = [&](Complex d) {
      std::array<Complex, 2> a = at;
      a[static_cast<std::size_t>(axis)] += d;
      return eval(a);
    };
    const TargetPoint fxp = shifted(h), fxm = shifted(-h);
    const TargetPoint fyp = shifted(Complex(0.0, h)), fym = shifted(Complex(0.0, -h));
    for (std::size_t i = 0; i < fxp.size(); ++i) {
      const Complex fx = (fxp[i] - fxm[i]) / (2.0 * h);
      const Complex fy = (fyp[i] - fym[i]) / (2.0 * h);
      const Complex d_holo = 0.5 * (fx - Complex(0.0, 1.0) * fy);
      const Complex d_anti = 0.5 * (fx + Complex(0.0, 1.0) * fy);
      worst = std::max(worst, std::abs(d_anti) / (1.0 + std::abs(d_holo)));
    }
  }
  return worst;
}

std::vector<Tangent> TestMap::jacobian_columns(const std::array<Complex, 2>& at) const {
  std::vector<Tangent> cols;
  for (int axis = 0; axis < p; ++axis) {
    const double h = fd_step[static_cast<std::size_t>(axis)];
    std::array<Complex, 2> ap = at, am = at;
    ap[static_cast<std::size_t>(axis)] += h;
    am[static_cast<std::size_t>(axis)] -= h;
    const TargetPoint fp = eval(ap), fm = eval(am);
    Tangent col(fp.size());
    for (std::size_t i = 0; i < fp.size(); ++i) col[i] = (fp[i] - fm[i]) / (2.0 * h);
    cols.push_back(std::move(col));
  }
  return cols;
}

namespace {

// Plucker coordinates of the wedge of one or two vectors.
std::vector<Complex> wedge_coords(const std::vector<Tangent>& vs) {
  if (vs.size() == 1) return vs[0];
  const Tangent& a = vs[0];
  const Tangent& b = vs[1];
  std::vector<Complex> w;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = i + 1; j < a.size(); ++j) w.push_back(a[i] * b[j] - a[j] * b[i]);
  return w;
}

double l2(const std::vector<Complex>& v) {
  double s = 0.0;
  for (const Complex& c : v) s += std::norm(c);
  return std::sqrt(s);
}

}  // namespace

std::vector<Tangent> normalize_pvector(const MetricSpec& m, const TargetPoint& at,
                                       std::vector<Tangent> vs) {
  const double n = pvector_norm(m, at, vs);
  if (n <= 1e-300) throw NumericError("normalize_pvector: zero p-vector");
  const double f = std::pow(n, -1.0 / static_cast<double>(vs.size()));
  for (Tangent& v : vs)
    for (Complex& c : v) c *= f;
  return vs;
}

BoundResult upper_bound(const TestMap& m, const std::vector<Tangent>& zeta) {
  if (m.p != 1 && m.p != 2) throw ValidationError("upper_bound: p must be 1 or 2");
  if (static_cast<int>(zeta.size()) != m.p)
    throw ValidationError("upper_bound: zeta must consist of p tangent vectors");

  const double unit = pvector_norm(m.metric, m.basepoint_image, zeta);
  if (std::abs(unit - 1.0) > 1e-6)
    throw ValidationError("upper_bound: zeta is not a unit p-vector in the reference metric");

  const double cr = m.holomorphy_residual({0.0, 0.0});
  if (cr > 1e-6)
    throw NumericError("upper_bound: holomorphy witness failed (CR residual too large)");

  const std::vector<Tangent> cols = m.jacobian_columns({0.0, 0.0});
  const std::vector<Complex> w = wedge_coords(cols);
  const std::vector<Complex> z = wedge_coords(zeta);
  const double wn = l2(w);
  const double zn = l2(z);
  if (wn <= 1e-12 * (1.0 + zn))
    throw NumericError("upper_bound: degenerate Jacobian (mu = 0)");

  Complex num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    num += w[i] * std::conj(z[i]);
    den += std::norm(z[i]);
  }
  const Complex mu_c = num / den;
  double resid2 = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) resid2 += std::norm(w[i] - mu_c * z[i]);
  const double collinearity = std::sqrt(resid2) / wn;
  if (collinearity > 1e-6)
    throw ValidationError("upper_bound: pushed p-vector is not collinear with zeta");

  const double mu_abs = pvector_norm(m.metric, m.basepoint_image, cols);
  if (mu_abs <= 1e-300) throw NumericError("upper_bound: degenerate Jacobian (mu = 0)");
  return {1.0 / mu_abs, mu_abs, collinearity};
}

TestMap k3_test_map(const WeierstrassFibration& x, Complex z0, const P1Point& t0,
                    double big_r) {
  if (!(big_r > 0.0)) throw ValidationError("k3_test_map: R must be positive");
  const RegularityReport reg = is_regular(x, t0);
  if (!reg.regular) throw ValidationError("k3_test_map: t0 lies on the singular locus");
  const double r = 0.9 * reg.chordal_distance;  // affine steps of |dt| <= r move
                                                // chordally by at most r
  const Chart chart = chart_of(t0);
  const Complex tc = chart_coord(t0);

  // the certificate direction must be honestly two-dimensional here
  const JacobianF jac = jacobian_f(x, z0, t0);
  const std::vector<Complex> j_wedge = wedge_coords(
      {Tangent(jac.rows[0].begin(), jac.rows[0].end()),
       Tangent(jac.rows[1].begin(), jac.rows[1].end())});
  if (l2(j_wedge) <= 1e-12)
    throw NumericError("k3_test_map: dF/dz wedge dF/dt degenerates at (z0, t0)");

  // Fiber lattices vary only with the t-sample; memoize them across the
  // handful of t values a certificate touches.  The fibration is copied into
  // the closure so the map owns everything it needs.
  auto cache = std::make_shared<std::map<std::pair<double, double>, PeriodLattice>>();
  auto eval = [cache, fib = x, chart, tc, z0, big_r, r](const std::array<Complex, 2>& uv) {
    const Complex t_here = tc + r * uv[1];
    const auto key = std::make_pair(std::real(t_here), std::imag(t_here));
    auto it = cache->find(key);
    if (it == cache->end()) {
      const CurveCoefficients cc = fiber_curve_in_chart(fib, chart, t_here);
      it = cache->emplace(key, period_lattice(cc)).first;
    }
    const auto [p, dp] = wp_pair(z0 + big_r * uv[0], it->second);
    return TargetPoint{p, dp, t_here};
  };

  TestMap m;
  m.p = 2;
  m.metric = {MetricSpec::Kind::fiber_fs, 1.0};
  m.eval = std::move(eval);
  try {
    m.basepoint_image = m.eval({0.0, 0.0});
  } catch (const PoleSignal&) {
    throw ValidationError("k3_test_map: z0 is a lattice point of the central fiber");
  }
  m.safety_radius = 1.0;
  m.fd_step = {1e-5 * (1.0 + std::abs(z0)) / big_r, 1e-5 * (1.0 + std::abs(tc)) / r};
  std::ostringstream desc;
  desc << "(u,v) -> F(z0 + R u, t0 + r v), R = " << big_r << ", r = " << r;
  m.description = desc.str();
  return m;
}

VanishingCertificate vanishing_certificate(const WeierstrassFibration& x, Complex z0,
                                           const P1Point& t0,
                                           const std::vector<double>& schedule) {
  // canonical direction: the normalized image of the coordinate 2-vector
  TestMap probe = k3_test_map(x, z0, t0, 1.0);
  const std::vector<Tangent> cols = probe.jacobian_columns({0.0, 0.0});
  const std::vector<Tangent> zeta =
      normalize_pvector(probe.metric, probe.basepoint_image, cols);
  return vanishing_certificate(x, z0, t0, zeta, schedule);
}

VanishingCertificate vanishing_certificate(const WeierstrassFibration& x, Complex z0,
                                           const P1Point& t0,
                                           const std::vector<Tangent>& zeta,
                                           const std::vector<double>& schedule) {
  if (schedule.size() < 2)
    throw ValidationError("vanishing_certificate: schedule needs at least two radii");
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    if (!(schedule[i] > 0.0))
      throw ValidationError("vanishing_certificate: radii must be positive");
    if (i > 0 && !(schedule[i] > schedule[i - 1]))
      throw ValidationError("vanishing_certificate: schedule must increase");
  }

  VanishingCertificate cert;
  cert.z0 = z0;
  cert.chart = chart_of(t0);
  cert.t_coord = chart_coord(t0);
  cert.zeta = zeta;

  for (const double r : schedule) {
    const TestMap m = k3_test_map(x, z0, t0, r);
    const BoundResult b = upper_bound(m, zeta);
    if (!cert.schedule.empty() && !(b.bound < cert.schedule.back().second))
      throw NumericError("vanishing_certificate: bounds failed to decrease");
    if (!(b.bound > 0.0))
      throw NumericError("vanishing_certificate: nonpositive bound");
    cert.schedule.emplace_back(r, b.bound);
    if (cert.target.empty()) cert.target = m.description;
  }

  // least-squares slope of log b against log R
  const std::size_t n = cert.schedule.size();
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (const auto& [r, b] : cert.schedule) {
    const double lx = std::log(r), ly = std::log(b);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double dn = static_cast<double>(n);
  cert.decay_exponent = (dn * sxy - sx * sy) / (dn * sxx - sx * sx);
  return cert;
}

PullbackReport pullback_check(const TestMap& m,
                              const std::function<TargetPoint(const TargetPoint&)>& h,
                              const MetricSpec& target_metric) {
  // the map's own canonical direction and bound
  const std::vector<Tangent> cols = m.jacobian_columns({0.0, 0.0});
  const std::vector<Tangent> zeta = normalize_pvector(m.metric, m.basepoint_image, cols);
  const double source_bound = upper_bound(m, zeta).bound;

  const TargetPoint& at = m.basepoint_image;
  const TargetPoint image = h(at);

  // differential of h at the base point
  const std::size_t n_in = at.size();
  const std::size_t n_out = image.size();
  std::vector<Tangent> dh(n_in, Tangent(n_out));
  for (std::size_t i = 0; i < n_in; ++i) {
    const double step = 1e-6 * (1.0 + std::abs(at[i]));
    TargetPoint xp = at, xm = at;
    xp[i] += step;
    xm[i] -= step;
    const TargetPoint fp = h(xp), fm = h(xm);
    if (fp.size() != n_out || fm.size() != n_out)
      throw ValidationError("pullback_check: h changed output dimension");
    for (std::size_t j = 0; j < n_out; ++j) dh[i][j] = (fp[j] - fm[j]) / (2.0 * step);
  }
  auto push = [&](const Tangent& v) {
    Tangent out(n_out, 0.0);
    for (std::size_t i = 0; i < n_in; ++i)
      for (std::size_t j = 0; j < n_out; ++j) out[j] += dh[i][j] * v[i];
    return out;
  };

  std::vector<Tangent> pushed;
  for (const Tangent& v : zeta) pushed.push_back(push(v));
  const double pushed_norm = pvector_norm(target_metric, image, pushed);
  if (pushed_norm <= 1e-9) {
    return {PullbackReport::Status::degenerate_direction, source_bound, 0.0, 0.0, 0.0};
  }
  const double expected = source_bound / pushed_norm;

  TestMap composed;
  composed.p = m.p;
  composed.metric = target_metric;
  const auto inner = m.eval;
  composed.eval = [inner, h](const std::array<Complex, 2>& uv) { return h(inner(uv)); };
  composed.basepoint_image = image;
  composed.safety_radius = m.safety_radius;
  composed.fd_step = m.fd_step;
  composed.description = "h composed with " + m.description;

  std::vector<Tangent> zeta_c = pushed;
  const double f = std::pow(pushed_norm, -1.0 / static_cast<double>(m.p));
  for (Tangent& v : zeta_c)
    for (Complex& c : v) c *= f;

  const double composed_bound = upper_bound(composed, zeta_c).bound;
  const double residual = std::abs(composed_bound - expected) / expected;
  return {PullbackReport::Status::ok, source_bound, composed_bound, expected, residual};
}

double best_bound(const std::vector<double>& bounds) {
  if (bounds.empty()) throw ValidationError("best_bound: empty family");
  return *std::min_element(bounds.begin(), bounds.end());
}

}  // namespace k3e
