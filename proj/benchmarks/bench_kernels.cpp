// Benchmarks for the lattice-sum kernels: the direct Eisenstein double sum
// at decreasing tolerances, the row-summed Weierstrass p evaluation against
// the raw truncated reference, and the surrounding machinery.

#include <benchmark/benchmark.h>

#include <complex>
#include <random>

#include "k3e/binary_form.hpp"
#include "k3e/eisenman.hpp"
#include "k3e/elliptic.hpp"
#include "k3e/fibration.hpp"

namespace {

using k3e::Complex;

const k3e::CurveCoefficients kCurve{Complex(1.7, 0.4), Complex(0.3, -0.8)};

void bm_eisenstein_direct_sum(benchmark::State& state) {
  const k3e::PeriodLattice lat = k3e::period_lattice(kCurve);
  const double tol = std::pow(10.0, -static_cast<double>(state.range(0)));
  for (auto _ : state) {
    const auto inv = k3e::eisenstein_invariants(lat, tol, tol);
    benchmark::DoNotOptimize(inv.g2.value);
  }
  state.SetLabel("abs tol 1e-" + std::to_string(state.range(0)));
}
BENCHMARK(bm_eisenstein_direct_sum)->DenseRange(2, 7)->Unit(benchmark::kMillisecond);

void bm_wp_row_sum(benchmark::State& state) {
  const k3e::PeriodLattice lat = k3e::period_lattice(kCurve);
  const Complex z = 0.31 * lat.omega1() + 0.17 * lat.omega2();
  for (auto _ : state) {
    benchmark::DoNotOptimize(k3e::wp_pair(z, lat, 1e-10));
  }
}
BENCHMARK(bm_wp_row_sum);

void bm_wp_direct_reference(benchmark::State& state) {
  const k3e::PeriodLattice lat = k3e::period_lattice(kCurve);
  const Complex z = 0.31 * lat.omega1() + 0.17 * lat.omega2();
  const double radius = static_cast<double>(state.range(0)) * std::abs(lat.omega1());
  for (auto _ : state) {
    benchmark::DoNotOptimize(k3e::wp_direct(z, lat, radius));
  }
  state.SetLabel("radius " + std::to_string(state.range(0)) + " |w1|");
}
BENCHMARK(bm_wp_direct_reference)->RangeMultiplier(4)->Range(16, 1024)->Unit(benchmark::kMillisecond);

void bm_period_lattice(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(k3e::period_lattice(kCurve));
  }
}
BENCHMARK(bm_period_lattice);

void bm_discriminant_roots(benchmark::State& state) {
  std::mt19937_64 rng(42);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<Complex> c2(9), c3(13);
  for (Complex& v : c2) v = Complex(g(rng), g(rng));
  for (Complex& v : c3) v = Complex(g(rng), g(rng));
  const k3e::BinaryForm g2(8, c2), g3(12, c3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(k3e::roots(k3e::discriminant_form(g2, g3)));
  }
}
BENCHMARK(bm_discriminant_roots)->Unit(benchmark::kMicrosecond);

void bm_certificate(benchmark::State& state) {
  std::mt19937_64 rng(606);
  const k3e::WeierstrassFibration fib = k3e::random_fibration(rng);
  const k3e::P1Point t0 = k3e::P1Point::affine(Complex(0.31, 0.12));
  const k3e::PeriodLattice lat = k3e::period_lattice(k3e::fiber_curve(fib, t0));
  const Complex z0 = 0.27 * lat.omega1() + 0.19 * lat.omega2();
  std::vector<double> schedule;
  for (int i = 0; i < 20; ++i) schedule.push_back(10.0 * std::pow(1000.0, i / 19.0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(k3e::vanishing_certificate(fib, z0, t0, schedule));
  }
}
BENCHMARK(bm_certificate)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
