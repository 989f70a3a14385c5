#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>

#ifndef K3E_CLI_PATH
#error "K3E_CLI_PATH must point at the CLI binary"
#endif

namespace {

using Json = nlohmann::json;

struct RunResult {
  int exit_code;
  std::string out;
};

int counter = 0;

RunResult run_cli(const std::string& args) {
  const std::string out_path =
      "/tmp/k3e_cli_out_" + std::to_string(getpid()) + "_" + std::to_string(counter++);
  const std::string cmd = std::string(K3E_CLI_PATH) + " " + args + " > " + out_path + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  std::ifstream in(out_path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  std::remove(out_path.c_str());
  return {WEXITSTATUS(status), buffer.str()};
}

std::string write_temp(const std::string& name, const std::string& content) {
  const std::string path = "/tmp/k3e_cli_fixture_" + std::to_string(getpid()) + "_" + name;
  std::ofstream out(path);
  out << content;
  return path;
}

// g2 = 0, g3 = t^12 - s^12 (coeffs listed lowest s-degree first)
std::string twelve_fixture() {
  Json g3_coeffs = Json::array();
  g3_coeffs.push_back(Json::array({1.0, 0.0}));
  for (int i = 0; i < 11; ++i) g3_coeffs.push_back(Json::array({0.0, 0.0}));
  g3_coeffs.push_back(Json::array({-1.0, 0.0}));
  Json g2_coeffs = Json::array();
  for (int i = 0; i < 9; ++i) g2_coeffs.push_back(Json::array({0.0, 0.0}));
  const Json fib{{"g2", {{"degree", 8}, {"coeffs", g2_coeffs}}},
                 {"g3", {{"degree", 12}, {"coeffs", g3_coeffs}}}};
  return write_temp("twelve.json", fib.dump());
}

// constant (4, 0) fibration
std::string square_fixture() {
  Json g2_coeffs = Json::array();
  for (int i = 0; i < 8; ++i) g2_coeffs.push_back(Json::array({0.0, 0.0}));
  g2_coeffs.push_back(Json::array({4.0, 0.0}));  // s^8 term comes last
  Json g3_coeffs = Json::array();
  for (int i = 0; i < 13; ++i) g3_coeffs.push_back(Json::array({0.0, 0.0}));
  const Json fib{{"g2", {{"degree", 8}, {"coeffs", g2_coeffs}}},
                 {"g3", {{"degree", 12}, {"coeffs", g3_coeffs}}}};
  return write_temp("square.json", fib.dump());
}

}  // namespace

TEST_CASE("discriminant subcommand") {
  const std::string path = twelve_fixture();
  const RunResult r = run_cli("discriminant --input " + path);
  REQUIRE(r.exit_code == 0);
  const Json report = Json::parse(r.out);
  CHECK(report["result"]["singular_locus"]["multiplicity_sum"] == 24);
  CHECK(report["result"]["singular_locus"]["points"].size() == 12);
  CHECK(report["result"]["delta"]["degree"] == 24);
}

TEST_CASE("validation failures exit with code 2") {
  SUBCASE("degenerate discriminant") {
    const Json fib{{"g2",
                    {{"degree", 8},
                     {"coeffs", Json::array({Json::array({0.0, 0.0}), Json::array({0.0, 0.0}),
                                             Json::array({0.0, 0.0}), Json::array({0.0, 0.0}),
                                             Json::array({0.0, 0.0}), Json::array({0.0, 0.0}),
                                             Json::array({0.0, 0.0}), Json::array({0.0, 0.0}),
                                             Json::array({3.0, 0.0})})}}},
                   {"g3",
                    {{"degree", 12},
                     {"coeffs", Json::array({Json::array({0.0, 0.0}), Json::array({0.0, 0.0}),
                                             Json::array({0.0, 0.0}), Json::array({0.0, 0.0}),
                                             Json::array({0.0, 0.0}), Json::array({0.0, 0.0}),
                                             Json::array({0.0, 0.0}), Json::array({0.0, 0.0}),
                                             Json::array({0.0, 0.0}), Json::array({0.0, 0.0}),
                                             Json::array({0.0, 0.0}), Json::array({0.0, 0.0}),
                                             Json::array({1.0, 0.0})})}}}};
    const std::string path = write_temp("degenerate.json", fib.dump());
    const RunResult r = run_cli("discriminant --input " + path);
    CHECK(r.exit_code == 2);
    const Json err = Json::parse(r.out);
    CHECK(err["error"]["kind"] == "validation");
  }

  SUBCASE("malformed JSON") {
    const std::string path = write_temp("broken.json", "{not json");
    const RunResult r = run_cli("discriminant --input " + path);
    CHECK(r.exit_code == 2);
    const Json err = Json::parse(r.out);
    CHECK(err["error"]["kind"] == "validation");
  }

  SUBCASE("wrong degree") {
    const Json fib{{"g2", {{"degree", 7}, {"coeffs", Json::array()}}},
                   {"g3", {{"degree", 12}, {"coeffs", Json::array()}}}};
    const std::string path = write_temp("deg7.json", fib.dump());
    const RunResult r = run_cli("discriminant --input " + path);
    CHECK(r.exit_code == 2);
  }

  SUBCASE("missing input") {
    const RunResult r = run_cli("discriminant");
    CHECK(r.exit_code == 2);
  }
}

TEST_CASE("fibers subcommand reports labels") {
  const std::string path = twelve_fixture();
  const RunResult r = run_cli("fibers --input " + path);
  REQUIRE(r.exit_code == 0);
  const Json report = Json::parse(r.out);
  REQUIRE(report["result"]["fibers"].size() == 12);
  for (const auto& f : report["result"]["fibers"]) CHECK(f["label"] == "II");
}

TEST_CASE("periods subcommand on the square fiber") {
  const std::string path = square_fixture();
  const RunResult r = run_cli("periods --input " + path + " --t 0");
  REQUIRE(r.exit_code == 0);
  const Json report = Json::parse(r.out);
  CHECK(std::abs(report["result"]["tau"][0].get<double>()) < 1e-10);
  CHECK(report["result"]["tau"][1].get<double>() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(report["result"]["round_trip_error"].get<double>() < 1e-6);
}

TEST_CASE("wp subcommand reports a small residual") {
  const std::string path = square_fixture();
  const RunResult r = run_cli("wp --input " + path + " --t 0 --z 0.4,0.3");
  REQUIRE(r.exit_code == 0);
  const Json report = Json::parse(r.out);
  CHECK(report["result"]["ode_residual"].get<double>() <=
        report["result"]["ode_residual_allowed"].get<double>());
}

TEST_CASE("certify subcommand") {
  const std::string path = twelve_fixture();

  SUBCASE("json certificate with slope -1") {
    const RunResult r = run_cli("certify --input " + path + " --t 3 --z 0.4,0.3 --rpoints 10");
    REQUIRE(r.exit_code == 0);
    const Json report = Json::parse(r.out);
    CHECK(std::abs(report["result"]["slope"].get<double>() + 1.0) < 1e-3);
    CHECK(report["result"]["schedule"].size() == 10);
    double prev = 1e300;
    for (const auto& row : report["result"]["schedule"]) {
      const double b = row["bound"].get<double>();
      CHECK(b > 0.0);
      CHECK(b < prev);
      prev = b;
    }
  }

  SUBCASE("csv export") {
    const RunResult r = run_cli("certify --input " + path + " --t 3 --z 0.4,0.3 --rpoints 5 --csv");
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.substr(0, 8) == "R,bound\n");
    int lines = 0;
    for (const char c : r.out)
      if (c == '\n') ++lines;
    CHECK(lines == 6);  // header + 5 rows
  }
}

TEST_CASE("lattice subcommands") {
  SUBCASE("signature of L") {
    const RunResult r = run_cli("lattice sig --lattice L");
    REQUIRE(r.exit_code == 0);
    const Json report = Json::parse(r.out);
    CHECK(report["result"]["rank"] == 22);
    CHECK(report["result"]["signature"][0] == 3);
    CHECK(report["result"]["signature"][1] == 19);
    CHECK(report["result"]["determinant"] == "-1");
    CHECK(report["result"]["even"] == true);
  }

  SUBCASE("hyperbolic plane in a lattice file") {
    const Json lat{{"rank", 3}, {"gram", Json::array({0, 1, 0, 1, 0, 0, 0, 0, -2})}};
    const std::string path = write_temp("u_plus.json", lat.dump());
    const RunResult r = run_cli("lattice contains-u --lattice " + path + " --bound 2");
    REQUIRE(r.exit_code == 0);
    const Json report = Json::parse(r.out);
    CHECK(report["result"]["status"] == "found");
    CHECK(report["result"]["e"] == Json::array({1, 0, 0}));
    CHECK(report["result"]["f"] == Json::array({0, 1, 0}));
  }

  SUBCASE("neron-severi of a period point file") {
    // omega = e20 + i e21: orthogonal to both E8 blocks and two U blocks
    Json omega = Json::array();
    for (int i = 0; i < 22; ++i) {
      double re = (i == 20) ? 1.0 : 0.0;
      double im = (i == 21) ? 1.0 : 0.0;
      omega.push_back(Json::array({re, im}));
    }
    const std::string path = write_temp("omega.json", Json{{"omega", omega}}.dump());
    const RunResult r = run_cli("lattice ns --omega " + path);
    REQUIRE(r.exit_code == 0);
    const Json report = Json::parse(r.out);
    CHECK(report["result"]["rank"] == 20);
  }
}

TEST_CASE("kodaira table dump") {
  const RunResult r = run_cli("--dump-kodaira-table");
  REQUIRE(r.exit_code == 0);
  const Json table = Json::parse(r.out);
  CHECK(table["rows"].size() == 10);
}

TEST_CASE("determinism") {
  SUBCASE("same file twice gives identical bytes") {
    const std::string path = twelve_fixture();
    const RunResult a = run_cli("discriminant --input " + path);
    const RunResult b = run_cli("discriminant --input " + path);
    CHECK(a.out == b.out);
  }

  SUBCASE("random fibrations are seed-determined") {
    const RunResult a = run_cli("discriminant --random --seed 7");
    const RunResult b = run_cli("discriminant --random --seed 7");
    const RunResult c = run_cli("discriminant --random --seed 8");
    REQUIRE(a.exit_code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out != c.out);
    const Json report = Json::parse(a.out);
    CHECK(report["result"]["singular_locus"]["multiplicity_sum"] == 24);
  }
}
