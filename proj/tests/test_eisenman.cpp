#include <doctest.h>

#include <cmath>
#include <random>

#include "k3e/eisenman.hpp"
#include "k3e/errors.hpp"
#include "oracles.hpp"

using k3e::Complex;
using k3e::MetricSpec;
using k3e::P1Point;
using k3e::Tangent;
using k3e::TargetPoint;
using k3e::TestMap;

namespace {

TestMap identity_bidisk() {
  TestMap m;
  m.p = 2;
  m.metric = {MetricSpec::Kind::euclidean, 1.0};
  m.eval = [](const std::array<Complex, 2>& uv) { return TargetPoint{uv[0], uv[1]}; };
  m.basepoint_image = {0.0, 0.0};
  m.fd_step = {1e-6, 1e-6};
  m.description = "identity bidisk";
  return m;
}

TestMap scaled_bidisk(double r) {
  TestMap m = identity_bidisk();
  m.eval = [r](const std::array<Complex, 2>& uv) { return TargetPoint{r * uv[0], r * uv[1]}; };
  m.description = "scaled bidisk";
  return m;
}

TestMap scaled_disk(double r) {
  TestMap m;
  m.p = 1;
  m.metric = {MetricSpec::Kind::euclidean, 1.0};
  m.eval = [r](const std::array<Complex, 2>& uv) { return TargetPoint{r * uv[0]}; };
  m.basepoint_image = {0.0};
  m.fd_step = {1e-6, 1e-6};
  m.description = "scaled disk";
  return m;
}

const std::vector<Tangent> kZeta2 = {{1.0, 0.0}, {0.0, 1.0}};
const std::vector<Tangent> kZeta1 = {{1.0}};

k3e::WeierstrassFibration sample_fibration() {
  std::mt19937_64 rng(606);
  return k3e::random_fibration(rng);
}

}  // namespace

TEST_CASE("model-space bounds") {
  CHECK(k3e::upper_bound(identity_bidisk(), kZeta2).bound == doctest::Approx(1.0).epsilon(1e-9));
  for (const double r : {2.0, 5.0, 25.0}) {
    CHECK(k3e::upper_bound(scaled_bidisk(r), kZeta2).bound ==
          doctest::Approx(1.0 / (r * r)).epsilon(1e-9));
    CHECK(k3e::upper_bound(scaled_disk(r), kZeta1).bound ==
          doctest::Approx(1.0 / r).epsilon(1e-9));
  }
}

TEST_CASE("upper_bound rejects bad inputs") {
  SUBCASE("non-unit zeta") {
    CHECK_THROWS_AS(k3e::upper_bound(identity_bidisk(), {{2.0, 0.0}, {0.0, 1.0}}),
                    k3e::ValidationError);
  }

  SUBCASE("non-collinear zeta") {
    // the identity pushes to e1^e2; e1^e3 is orthogonal to it
    TestMap m = identity_bidisk();
    m.eval = [](const std::array<Complex, 2>& uv) { return TargetPoint{uv[0], uv[1], 0.0}; };
    m.basepoint_image = {0.0, 0.0, 0.0};
    CHECK_THROWS_AS(k3e::upper_bound(m, {{1.0, 0.0, 0.0}, {0.0, 0.0, 1.0}}),
                    k3e::ValidationError);
  }

  SUBCASE("degenerate jacobian") {
    TestMap m = identity_bidisk();
    m.eval = [](const std::array<Complex, 2>& uv) {
      return TargetPoint{uv[0] + uv[1], uv[0] + uv[1]};
    };
    CHECK_THROWS_AS(k3e::upper_bound(m, kZeta2), k3e::NumericError);
  }

  SUBCASE("non-holomorphic map fails the witness") {
    TestMap m = identity_bidisk();
    m.eval = [](const std::array<Complex, 2>& uv) {
      return TargetPoint{std::conj(uv[0]), uv[1]};
    };
    CHECK_THROWS_AS(k3e::upper_bound(m, kZeta2), k3e::NumericError);
  }
}

TEST_CASE("metric scale covariance") {
  // scaling the reference metric by c multiplies p-vector norms by c^(p/2)
  for (const double c : {0.25, 4.0}) {
    TestMap m1 = scaled_disk(3.0);
    m1.metric.scale = c;
    std::vector<Tangent> zeta = {{Complex(1.0 / std::sqrt(c))}};
    CHECK(k3e::upper_bound(m1, zeta).bound ==
          doctest::Approx(1.0 / (3.0 * std::sqrt(c))).epsilon(1e-9));

    TestMap m2 = scaled_bidisk(3.0);
    m2.metric.scale = c;
    std::vector<Tangent> zeta2 = {{Complex(1.0 / std::sqrt(c)), 0.0},
                                  {0.0, Complex(1.0 / std::sqrt(c))}};
    CHECK(k3e::upper_bound(m2, zeta2).bound ==
          doctest::Approx(1.0 / (9.0 * c)).epsilon(1e-9));
  }
}

TEST_CASE("fiber metric sanity") {
  // at the chart origin the FS x chordal metric is the flat metric
  const MetricSpec m{MetricSpec::Kind::fiber_fs, 1.0};
  const TargetPoint origin{0.0, 0.0, 0.0};
  CHECK(k3e::pvector_norm(m, origin, {{1.0, 0.0, 0.0}}) == doctest::Approx(1.0));
  CHECK(k3e::pvector_norm(m, origin, {{0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}}) ==
        doctest::Approx(1.0));
  // away from the origin the metric shrinks (bounded geometry)
  const TargetPoint far{10.0, 5.0, 2.0};
  CHECK(k3e::pvector_norm(m, far, {{1.0, 0.0, 0.0}}) < 1.0);
}

TEST_CASE("k3 test maps") {
  const k3e::WeierstrassFibration fib = sample_fibration();
  const P1Point t0 = P1Point::affine(Complex(0.31, 0.12));
  REQUIRE(k3e::is_regular(fib, t0).regular);
  const k3e::PeriodLattice lat = k3e::period_lattice(k3e::fiber_curve(fib, t0));
  const Complex z0 = 0.27 * lat.omega1() + 0.19 * lat.omega2();

  SUBCASE("image of the origin is the uniformized point") {
    const TestMap m = k3e::k3_test_map(fib, z0, t0, 7.0);
    const k3e::FiberPoint p = k3e::uniformize(fib, z0, t0);
    // the test map reports affine (x, y, t); compare against the projective point
    CHECK(std::abs(m.basepoint_image[0] - p.x() / p.z()) < 1e-9 * (1.0 + std::abs(p.x())));
    CHECK(std::abs(m.basepoint_image[1] - p.y() / p.z()) < 1e-9 * (1.0 + std::abs(p.y())));
    CHECK(std::abs(m.basepoint_image[2] - t0.affine_coord()) < 1e-12);
  }

  SUBCASE("defined for every radius") {
    for (const double r : {1.0, 1e2, 1e4, 1e6}) {
      const TestMap m = k3e::k3_test_map(fib, z0, t0, r);
      const TargetPoint val = m(Complex(0.5, 0.25), Complex(-0.3, 0.4));
      for (const Complex& c : val) CHECK(std::isfinite(std::abs(c)));
    }
  }

  SUBCASE("holomorphy witness at random interior points") {
    const TestMap m = k3e::k3_test_map(fib, z0, t0, 3.0);
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    for (int i = 0; i < 5; ++i) {
      const std::array<Complex, 2> at{Complex(u(rng), u(rng)), Complex(u(rng), u(rng))};
      CHECK(m.holomorphy_residual(at) <= 1e-6);
    }
  }

  SUBCASE("singular base points are rejected") {
    const auto& bad = fib.singular_locus().front().point;
    CHECK_THROWS_AS(k3e::k3_test_map(fib, z0, bad, 2.0), k3e::ValidationError);
  }

  SUBCASE("lattice z0 is rejected") {
    CHECK_THROWS_AS(k3e::k3_test_map(fib, 0.0, t0, 2.0), k3e::ValidationError);
  }
}

TEST_CASE("vanishing certificates") {
  const k3e::WeierstrassFibration fib = sample_fibration();
  const P1Point t0 = P1Point::affine(Complex(0.31, 0.12));
  const k3e::PeriodLattice lat = k3e::period_lattice(k3e::fiber_curve(fib, t0));
  const Complex z0 = 0.27 * lat.omega1() + 0.19 * lat.omega2();
  const std::vector<double> schedule{10.0, 31.622776601683793, 100.0, 316.22776601683796,
                                     1000.0, 3162.2776601683795, 10000.0};

  const k3e::VanishingCertificate cert = k3e::vanishing_certificate(fib, z0, t0, schedule);

  SUBCASE("bounds decrease like 1/R with slope -1") {
    REQUIRE(cert.schedule.size() == schedule.size());
    for (std::size_t i = 0; i < cert.schedule.size(); ++i) {
      CHECK(cert.schedule[i].second > 0.0);
      if (i > 0) CHECK(cert.schedule[i].second < cert.schedule[i - 1].second);
    }
    CHECK(std::abs(cert.decay_exponent + 1.0) < 1e-6);
    const double ratio = cert.schedule.back().second / cert.schedule.front().second;
    CHECK(std::abs(ratio - 1e-3) < 1e-6 * 1e-3);
  }

  SUBCASE("bounds match 1/(R r |J|) with the jacobian measured independently") {
    const k3e::JacobianF jac = k3e::jacobian_f(fib, z0, t0.canonicalized());
    const double r_disk = 0.9 * k3e::is_regular(fib, t0).chordal_distance;
    const TestMap probe = k3e::k3_test_map(fib, z0, t0, 1.0);
    // the test map carries the base coordinate along, so its t-column is
    // (dx/dt, dy/dt, 1); jacobian_f only reports the fiber part
    const Tangent col_z{jac.rows[0][0], jac.rows[0][1], 0.0};
    const Tangent col_t{jac.rows[1][0], jac.rows[1][1], 1.0};
    const double jn =
        k3e::pvector_norm(probe.metric, probe.basepoint_image, {col_z, col_t});
    for (const auto& [r, bound] : cert.schedule)
      CHECK(bound == doctest::Approx(1.0 / (r * r_disk * jn)).epsilon(1e-6));
  }

  SUBCASE("reproducible to the bit") {
    const k3e::VanishingCertificate again = k3e::vanishing_certificate(fib, z0, t0, schedule);
    for (std::size_t i = 0; i < cert.schedule.size(); ++i)
      CHECK(again.schedule[i].second == cert.schedule[i].second);
  }

  SUBCASE("schedules must increase") {
    CHECK_THROWS_AS(k3e::vanishing_certificate(fib, z0, t0, {10.0, 5.0}),
                    k3e::ValidationError);
    CHECK_THROWS_AS(k3e::vanishing_certificate(fib, z0, t0, {10.0}), k3e::ValidationError);
  }

  SUBCASE("base-point coverage over a grid") {
    int built = 0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        const Complex z = (0.15 + 0.25 * i) * lat.omega1() + (0.15 + 0.25 * j) * lat.omega2();
        try {
          const auto c = k3e::vanishing_certificate(fib, z, t0, {10.0, 100.0, 1000.0});
          CHECK(c.schedule.back().second < c.schedule.front().second);
          ++built;
        } catch (const k3e::NumericError&) {
          // degenerate direction at this sample; allowed but rare
        }
      }
    CHECK(built >= 8);
  }
}

TEST_CASE("pullback transformation law") {
  SUBCASE("identity map") {
    const auto rep = k3e::pullback_check(
        identity_bidisk(), [](const TargetPoint& x) { return x; },
        {MetricSpec::Kind::euclidean, 1.0});
    REQUIRE(rep.status == k3e::PullbackReport::Status::ok);
    CHECK(rep.residual < 1e-9);
  }

  SUBCASE("linear maps transform by the jacobian factor") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 10; ++trial) {
      // a well-conditioned random 2x2 complex matrix
      Complex a = oracle::random_complex(rng), b = oracle::random_complex(rng);
      Complex c = oracle::random_complex(rng), d = oracle::random_complex(rng);
      const Complex det = a * d - b * c;
      if (std::abs(det) < 0.3) continue;
      auto h = [=](const TargetPoint& x) {
        return TargetPoint{a * x[0] + b * x[1], c * x[0] + d * x[1]};
      };
      const auto rep = k3e::pullback_check(identity_bidisk(), h,
                                           {MetricSpec::Kind::euclidean, 1.0});
      REQUIRE(rep.status == k3e::PullbackReport::Status::ok);
      CHECK(rep.residual < 1e-6);
      // for p = 2 euclidean targets the factor is exactly 1/|det|
      CHECK(rep.composed_bound ==
            doctest::Approx(rep.source_bound / std::abs(det)).epsilon(1e-6));
    }
  }

  SUBCASE("projections agree with the product mechanism") {
    // m: disk -> C^2, u -> (a u, b u); pr1 drops the second coordinate
    TestMap m;
    m.p = 1;
    m.metric = {MetricSpec::Kind::euclidean, 1.0};
    const Complex a(1.3, -0.2), b(0.4, 0.9);
    m.eval = [=](const std::array<Complex, 2>& uv) {
      return TargetPoint{a * uv[0], b * uv[0]};
    };
    m.basepoint_image = {0.0, 0.0};
    m.fd_step = {1e-6, 1e-6};
    const auto rep = k3e::pullback_check(
        m, [](const TargetPoint& x) { return TargetPoint{x[0]}; },
        {MetricSpec::Kind::euclidean, 1.0});
    REQUIRE(rep.status == k3e::PullbackReport::Status::ok);
    CHECK(rep.residual < 1e-6);
  }

  SUBCASE("rank drop is reported as a degenerate direction") {
    const auto rep = k3e::pullback_check(
        identity_bidisk(), [](const TargetPoint& x) { return TargetPoint{x[0]}; },
        {MetricSpec::Kind::euclidean, 1.0});
    CHECK(rep.status == k3e::PullbackReport::Status::degenerate_direction);
  }
}

TEST_CASE("family minimum only improves") {
  std::vector<double> bounds{0.8};
  const double first = k3e::best_bound(bounds);
  bounds.push_back(1.7);
  bounds.push_back(0.3);
  CHECK(k3e::best_bound(bounds) <= first);
  CHECK(k3e::best_bound(bounds) == 0.3);
  CHECK_THROWS_AS(k3e::best_bound({}), k3e::ValidationError);
}
