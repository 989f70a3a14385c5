// k3e: analytics for elliptic K3 surfaces in Weierstrass form.
//
// Subcommands ingest fibration / lattice JSON, run the analytic pipeline and
// emit JSON reports (CSV for plot series).  Exit codes: 0 success,
// 2 validation error, 3 numerical-tolerance failure.

#include <CLI11.hpp>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>

#include "k3e/eisenman.hpp"
#include "k3e/elliptic.hpp"
#include "k3e/errors.hpp"
#include "k3e/fibration.hpp"
#include "k3e/lattice.hpp"
#include "k3e/serialization.hpp"

namespace {

using k3e::Complex;
using k3e::Json;

bool log_enabled() {
  const char* v = std::getenv("K3E_LOG");
  return v != nullptr && *v != '\0' && std::string(v) != "0";
}

void log_note(const std::string& msg) {
  if (log_enabled()) std::cerr << "[k3e] " << msg << "\n";
}

struct Options {
  std::string input;
  bool random = false;
  unsigned long long seed = 0;
  double tol_wp = 1e-10;
  double tol_eis = 1e-6;  // relative, at the CLI level
  bool csv = false;
  bool json = true;
  std::string t_arg;
  std::string z_arg = "0.3,0.2";
  double rmin = 10.0, rmax = 1e4;
  int rpoints = 20;
  std::string lattice_arg = "L";
  std::string omega_file;
  int bound = 2;
  double tol_ns = 1e-9;
};

Complex parse_complex(const std::string& s) {
  std::string body = s;
  const auto comma = body.find(',');
  try {
    if (comma == std::string::npos) return Complex(std::stod(body), 0.0);
    return Complex(std::stod(body.substr(0, comma)), std::stod(body.substr(comma + 1)));
  } catch (const std::exception&) {
    throw k3e::ValidationError("could not parse complex number '" + s + "' (use re or re,im)");
  }
}

k3e::P1Point parse_p1(const std::string& s) {
  if (s == "inf" || s == "infinity" || s == "oo") return k3e::P1Point::infinity();
  return k3e::P1Point::affine(parse_complex(s));
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw k3e::ValidationError("cannot open input file '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw k3e::ValidationError(std::string("malformed JSON: ") + e.what());
  }
}

k3e::WeierstrassFibration load_fibration(const Options& opt) {
  if (opt.random) {
    std::mt19937_64 rng(opt.seed);
    log_note("generating random fibration from seed " + std::to_string(opt.seed));
    return k3e::random_fibration(rng);
  }
  if (opt.input.empty())
    throw k3e::ValidationError("no input: pass --input FILE or --random");
  return k3e::fibration_from_json(load_json_file(opt.input));
}

Json config_json(const Options& opt, const std::string& command) {
  Json cfg{{"tol_wp", opt.tol_wp},
           {"tol_eis", opt.tol_eis},
           {"seed", opt.seed},
           {"input", opt.random ? "random" : opt.input}};
  return Json{{"tool", "k3e"}, {"version", "0.1.0"}, {"command", command}, {"config", cfg}};
}

void emit(const Json& report) { std::cout << report.dump(2) << "\n"; }

Json singular_locus_json(const k3e::WeierstrassFibration& fib) {
  Json pts = Json::array();
  int total = 0;
  for (const k3e::RootOnP1& r : fib.singular_locus()) {
    Json p = k3e::p1_point_to_json(r.point);
    p["infinity"] = r.point.is_infinity();
    p["multiplicity"] = r.multiplicity;
    pts.push_back(p);
    total += r.multiplicity;
  }
  return Json{{"points", pts}, {"multiplicity_sum", total}};
}

int cmd_discriminant(const Options& opt) {
  const k3e::WeierstrassFibration fib = load_fibration(opt);
  Json report = config_json(opt, "discriminant");
  report["result"] = Json{{"delta", k3e::form_to_json(fib.delta())},
                          {"singular_locus", singular_locus_json(fib)}};
  emit(report);
  return 0;
}

int cmd_fibers(const Options& opt) {
  const k3e::WeierstrassFibration fib = load_fibration(opt);
  Json fibers = Json::array();
  for (const k3e::RootOnP1& r : fib.singular_locus()) {
    const k3e::KodairaLabel label = k3e::kodaira_type(fib, r.point);
    Json row = k3e::p1_point_to_json(r.point);
    row["infinity"] = r.point.is_infinity();
    row["label"] = label.name();
    row["vanishing"] = Json::array({label.ord_g2, label.ord_g3, label.ord_delta});
    fibers.push_back(row);
  }
  Json report = config_json(opt, "fibers");
  report["result"] = Json{{"fibers", fibers}};
  emit(report);
  return 0;
}

int cmd_periods(const Options& opt) {
  const k3e::WeierstrassFibration fib = load_fibration(opt);
  const k3e::P1Point t = parse_p1(opt.t_arg);
  const k3e::CurveCoefficients c = k3e::fiber_curve(fib, t);
  const k3e::PeriodLattice lat = k3e::period_lattice(c);
  // --tol-eis is relative at the CLI level; scale it per invariant
  const double scale = std::max({std::abs(c.g2), std::pow(std::abs(c.g3), 2.0 / 3.0), 1.0});
  const k3e::EisensteinInvariants inv =
      k3e::eisenstein_invariants(lat, opt.tol_eis * scale, opt.tol_eis * std::pow(scale, 1.5));
  const double rt_err = std::max(std::abs(inv.g2.value - c.g2) / scale,
                                 std::abs(inv.g3.value - c.g3) / std::pow(scale, 1.5));
  Json report = config_json(opt, "periods");
  report["result"] = Json{{"fiber", {{"g2", k3e::complex_to_json(c.g2)},
                                     {"g3", k3e::complex_to_json(c.g3)}}},
                          {"omega1", k3e::complex_to_json(lat.omega1())},
                          {"omega2", k3e::complex_to_json(lat.omega2())},
                          {"tau", k3e::complex_to_json(lat.tau())},
                          {"eisenstein_g2", k3e::complex_to_json(inv.g2.value)},
                          {"eisenstein_g3", k3e::complex_to_json(inv.g3.value)},
                          {"round_trip_error", rt_err}};
  emit(report);
  return rt_err <= 1e-6 ? 0 : 3;
}

int cmd_wp(const Options& opt) {
  const k3e::WeierstrassFibration fib = load_fibration(opt);
  const k3e::P1Point t = parse_p1(opt.t_arg);
  const Complex z = parse_complex(opt.z_arg);
  const k3e::CurveCoefficients c = k3e::fiber_curve(fib, t);
  const k3e::PeriodLattice lat = k3e::period_lattice(c);
  const auto [p, dp] = k3e::wp_pair(z, lat, opt.tol_wp);
  const Complex lhs = dp * dp;
  const Complex rhs = 4.0 * p * p * p - c.g2 * p - c.g3;
  const double residual = std::abs(lhs - rhs);
  const double allowed = 1e-8 * (1.0 + std::pow(std::abs(p), 3.0));
  Json report = config_json(opt, "wp");
  report["result"] = Json{{"wp", k3e::complex_to_json(p)},
                          {"wp_prime", k3e::complex_to_json(dp)},
                          {"ode_residual", residual},
                          {"ode_residual_allowed", allowed}};
  emit(report);
  return residual <= allowed ? 0 : 3;
}

std::vector<double> log_schedule(double rmin, double rmax, int n) {
  if (!(rmin > 0.0) || !(rmax > rmin) || n < 2)
    throw k3e::ValidationError("schedule requires 0 < rmin < rmax and rpoints >= 2");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    out.push_back(rmin * std::pow(rmax / rmin, static_cast<double>(i) / (n - 1)));
  return out;
}

int cmd_certify(const Options& opt) {
  const k3e::WeierstrassFibration fib = load_fibration(opt);
  const k3e::P1Point t = parse_p1(opt.t_arg);
  const Complex z = parse_complex(opt.z_arg);
  const auto schedule = log_schedule(opt.rmin, opt.rmax, opt.rpoints);
  const k3e::VanishingCertificate cert = k3e::vanishing_certificate(fib, z, t, schedule);
  if (opt.csv) {
    std::cout << k3e::certificate_to_csv(cert);
  } else {
    Json report = config_json(opt, "certify");
    report["config"]["schedule"] =
        Json{{"rmin", opt.rmin}, {"rmax", opt.rmax}, {"rpoints", opt.rpoints}};
    report["result"] = k3e::certificate_to_json(cert);
    emit(report);
  }
  const double slope_err = std::abs(cert.decay_exponent + 1.0);
  return slope_err <= 1e-3 ? 0 : 3;
}

k3e::IntegralLattice load_lattice(const Options& opt) {
  if (opt.lattice_arg == "L") return k3e::k3_lattice();
  if (opt.lattice_arg == "U") return k3e::lattice_u();
  if (opt.lattice_arg == "E8-") return k3e::lattice_e8_minus();
  return k3e::lattice_from_json(load_json_file(opt.lattice_arg));
}

int cmd_lattice_sig(const Options& opt) {
  const k3e::IntegralLattice lat = load_lattice(opt);
  const auto [pos, neg] = k3e::signature(lat);
  Json report = config_json(opt, "lattice sig");
  report["result"] = Json{{"rank", lat.rank()},
                          {"signature", Json::array({pos, neg})},
                          {"even", lat.is_even()},
                          {"determinant", k3e::determinant(lat).str()}};
  emit(report);
  return 0;
}

int cmd_lattice_ns(const Options& opt) {
  if (opt.omega_file.empty()) throw k3e::ValidationError("lattice ns needs --omega FILE");
  const k3e::PeriodPoint omega = k3e::period_point_from_json(load_json_file(opt.omega_file));
  const k3e::NeronSeveri ns = k3e::neron_severi(omega, opt.tol_ns);
  Json basis = Json::array();
  for (const k3e::IntVector& v : ns.basis) {
    Json row = Json::array();
    for (const long long x : v) row.push_back(x);
    basis.push_back(row);
  }
  Json report = config_json(opt, "lattice ns");
  report["config"]["tol_ns"] = opt.tol_ns;
  report["result"] = Json{{"rank", ns.rank()},
                          {"basis", basis},
                          {"gram", k3e::lattice_to_json(ns.lattice)},
                          {"on_period_quadric", k3e::is_on_period_quadric(omega, 1e-9)}};
  emit(report);
  return 0;
}

int cmd_lattice_contains_u(const Options& opt) {
  const k3e::IntegralLattice lat = load_lattice(opt);
  const k3e::HyperbolicPlaneSearch res = k3e::contains_hyperbolic_plane(lat, opt.bound);
  Json result{{"bound", res.search_bound}};
  switch (res.status) {
    case k3e::HyperbolicPlaneSearch::Status::found: {
      result["status"] = "found";
      Json e = Json::array(), f = Json::array();
      for (const long long v : res.pair->first) e.push_back(v);
      for (const long long v : res.pair->second) f.push_back(v);
      result["e"] = e;
      result["f"] = f;
      break;
    }
    case k3e::HyperbolicPlaneSearch::Status::rank_obstruction:
      result["status"] = "rank obstruction: rank < 2";
      break;
    case k3e::HyperbolicPlaneSearch::Status::definiteness_obstruction:
      result["status"] = "definiteness obstruction: no nonzero isotropic vectors";
      break;
    case k3e::HyperbolicPlaneSearch::Status::not_found_up_to_bound:
      result["status"] = "not found up to bound";
      break;
  }
  Json report = config_json(opt, "lattice contains-u");
  report["result"] = result;
  emit(report);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"elliptic K3 surfaces in Weierstrass form: discriminants, periods, "
               "Kodaira fibers, K3 lattices and Eisenman decay certificates"};
  app.require_subcommand(0, 1);

  Options opt;
  bool dump_table = false;
  app.add_flag("--dump-kodaira-table", dump_table, "print the Kodaira lookup table as JSON");

  auto add_common = [&](CLI::App* cmd, bool needs_input) {
    if (needs_input) {
      cmd->add_option("--input", opt.input, "fibration JSON file");
      cmd->add_flag("--random", opt.random, "generate a random fibration from --seed");
      cmd->add_option("--seed", opt.seed, "RNG seed for --random");
    }
    cmd->add_option("--tol-wp", opt.tol_wp, "Weierstrass p tolerance");
    cmd->add_option("--tol-eis", opt.tol_eis, "Eisenstein round-trip tolerance (relative)");
    cmd->add_flag("--json", opt.json, "JSON output (default)");
    cmd->add_flag("--csv", opt.csv, "CSV output where supported");
  };

  CLI::App* disc = app.add_subcommand("discriminant", "discriminant form and singular locus");
  add_common(disc, true);

  CLI::App* fibers = app.add_subcommand("fibers", "Kodaira labels over the singular locus");
  add_common(fibers, true);

  CLI::App* periods = app.add_subcommand("periods", "period lattice of a fiber");
  add_common(periods, true);
  periods->add_option("--t", opt.t_arg, "base point (re[,im] or inf)")->required();

  CLI::App* wp_cmd = app.add_subcommand("wp", "Weierstrass p on a fiber");
  add_common(wp_cmd, true);
  wp_cmd->add_option("--t", opt.t_arg, "base point (re[,im] or inf)")->required();
  wp_cmd->add_option("--z", opt.z_arg, "evaluation point (re[,im])");

  CLI::App* certify = app.add_subcommand("certify", "Eisenman decay certificate");
  add_common(certify, true);
  certify->add_option("--t", opt.t_arg, "base point (re[,im] or inf)")->required();
  certify->add_option("--z", opt.z_arg, "z0 on the central fiber (re[,im])");
  certify->add_option("--rmin", opt.rmin, "smallest radius");
  certify->add_option("--rmax", opt.rmax, "largest radius");
  certify->add_option("--rpoints", opt.rpoints, "number of radii (log spaced)");

  CLI::App* lattice = app.add_subcommand("lattice", "integral lattice reports");
  CLI::App* sig = lattice->add_subcommand("sig", "rank, signature, determinant");
  sig->add_option("--lattice", opt.lattice_arg, "L, U, E8-, or a JSON file");
  CLI::App* ns = lattice->add_subcommand("ns", "Neron-Severi lattice of a period point");
  ns->add_option("--omega", opt.omega_file, "period point JSON file")->required();
  ns->add_option("--tol", opt.tol_ns, "orthogonality tolerance");
  CLI::App* contains_u = lattice->add_subcommand("contains-u", "hyperbolic plane search");
  contains_u->add_option("--lattice", opt.lattice_arg, "L, U, E8-, or a JSON file");
  contains_u->add_option("--bound", opt.bound, "coordinate box bound");
  lattice->require_subcommand(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (dump_table) {
      std::cout << k3e::kodaira_table_json() << "\n";
      return 0;
    }
    if (disc->parsed()) return cmd_discriminant(opt);
    if (fibers->parsed()) return cmd_fibers(opt);
    if (periods->parsed()) return cmd_periods(opt);
    if (wp_cmd->parsed()) return cmd_wp(opt);
    if (certify->parsed()) return cmd_certify(opt);
    if (lattice->parsed()) {
      if (sig->parsed()) return cmd_lattice_sig(opt);
      if (ns->parsed()) return cmd_lattice_ns(opt);
      if (contains_u->parsed()) return cmd_lattice_contains_u(opt);
    }
    std::cerr << app.help() << "\n";
    return 2;
  } catch (const k3e::ValidationError& e) {
    Json err{{"error", {{"kind", "validation"}, {"message", e.what()}}}};
    std::cout << err.dump(2) << "\n";
    return 2;
  } catch (const k3e::PoleSignal& e) {
    Json err{{"error", {{"kind", "pole"}, {"message", e.what()}}}};
    std::cout << err.dump(2) << "\n";
    return 3;
  } catch (const k3e::NumericError& e) {
    Json err{{"error", {{"kind", "numeric"}, {"message", e.what()}}}};
    std::cout << err.dump(2) << "\n";
    return 3;
  } catch (const std::exception& e) {
    Json err{{"error", {{"kind", "internal"}, {"message", e.what()}}}};
    std::cout << err.dump(2) << "\n";
    return 3;
  }
}
