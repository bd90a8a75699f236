#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include "axmhd/config.hpp"
#include "axmhd/demo.hpp"
#include "axmhd/runner.hpp"
#include "doctest.h"

using namespace axmhd;

namespace {

const char* base = "mesh_rect = 0.2, 1.0, -0.2, 0.3\nh_e = 0.1\ndt = 1e-9\nt_end = 1e-8\n";

RunConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in, "test.cfg", std::filesystem::temp_directory_path());
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::IoError;
}

std::filesystem::path temp_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("axmhd_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("config parsing") {
  const auto c = parse(std::string(base) +
                       "# comment\nzeta = 50   # trailing\nscheme = rk4\nT_wall_eV = none\n"
                       "probe = a, 1.0, 0.05, toroidal\nchord = c, 0.3, 0.0, 0.9, 0.0, T_i\n"
                       "correction_model = 2\nvelocity_bc = normal-zero\n");
  CHECK(c.physics.zeta == 50.0);
  CHECK(c.scheme == Scheme::RK4);
  CHECK_FALSE(c.T_wall_eV.has_value());
  REQUIRE(c.probes.size() == 1);
  CHECK(c.probes[0].channel == ProbeChannel::Toroidal);
  CHECK(c.probes[0].location.r == 1.0);
  REQUIRE(c.chords.size() == 1);
  CHECK(c.chords[0].field == ChordField::IonTemperature);
  CHECK(c.physics.correction_model == CorrectionModel::EnergyConserving);
  CHECK(c.velocity_mode == VelocityMode::NormalZero);
  CHECK(c.rect_z->max == 0.3);
  CHECK(c.resolve("x.csv") == (std::filesystem::temp_directory_path() / "x.csv").string());
  CHECK(c.resolve("/abs/x.csv") == "/abs/x.csv");
}

TEST_CASE("config errors") {
  CHECK(code_of([] { parse(std::string(base) + "bogus = 1\n"); }) == ErrorCode::ConfigError);
  CHECK(code_of([] { parse(std::string(base) + "no equals sign\n"); }) == ErrorCode::ConfigError);
  CHECK(code_of([] { parse(std::string(base) + "zeta = fifty\n"); }) == ErrorCode::ConfigError);
  CHECK(code_of([] { parse(std::string(base) + "t_end = 1e-10\n"); }) == ErrorCode::ConfigError);
  CHECK(code_of([] { parse(std::string(base) + "dt = 0\n"); }) == ErrorCode::ConfigError);
  CHECK(code_of([] { parse(std::string(base) + "correction_model = 3\n"); }) == ErrorCode::ConfigError);
  CHECK(code_of([] { parse(std::string(base) + "psi_bc = table\n"); }) == ErrorCode::ConfigError);
  CHECK(code_of([] { parse(std::string(base) + "probe = a, 1.0, 0.0, sideways\n"); }) == ErrorCode::ConfigError);
  CHECK(code_of([] { parse(std::string(base) + "V_gun_waveform = missing_file.csv\n"); }) == ErrorCode::ConfigError);
  CHECK(code_of([] { parse("dt = 1e-9\nt_end = 1e-8\n"); }) == ErrorCode::ConfigError);
  CHECK(code_of([] { parse(std::string(base) + "scheme = leapfrog\n"); }) == ErrorCode::ConfigError);
  CHECK(code_of([] { load_config("/nonexistent/run.cfg"); }) != ErrorCode::ConfigError);
}

TEST_CASE("config keys are documented") {
  for (const auto& [key, doc] : config_keys()) {
    INFO(key);
    CHECK_FALSE(doc.empty());
  }
  CHECK(config_keys().count("zeta") == 1);
  CHECK(config_keys().count("probe") == 1);
}

TEST_CASE("model 2 corrections report angular momentum as not conserved") {
  RunConfig cfg = parse(std::string(base) +
                        "mode = verify-conservation\nsteps = 5\nzeta = 50\ncorrection_model = 2\n");
  std::ostringstream log;
  const auto checks = verify_conservation(cfg, log);
  bool seen = false;
  for (const auto& c : checks)
    if (c.name == "angular momentum") {
      seen = true;
      CHECK(c.note == "not conserved (model 2)");
    }
  CHECK(seen);
}

TEST_CASE("short simulate run writes its outputs") {
  const auto dir = temp_dir("simulate");
  RunConfig cfg = parse(std::string(base) + "initial = smooth\nT_wall_eV = none\nsnapshots = true\n" +
                        "probe = outer, 1.0, 0.05, poloidal\nchord = mid, 0.3, 0.05, 0.9, 0.05, n_e\n");
  cfg.output_dir = dir.string();
  std::ostringstream log;
  int seen = 0;
  const auto sum = simulate(cfg, log, [&](const StepView&) { ++seen; });
  CHECK(sum.steps == 10);
  CHECK(sum.t == doctest::Approx(1e-8));
  CHECK(seen == static_cast<int>(sum.records));
  CHECK(std::filesystem::exists(dir / "timeseries.csv"));
  std::ifstream ts(dir / "timeseries.csv");
  std::string header;
  std::getline(ts, header);
  CHECK(header == "t,N,Phi,P_phi,U_K,U_Th,U_M,U_total,outer,mid");
  std::filesystem::remove_all(dir);
}

TEST_CASE("formation demo setup files") {
  const auto dir = temp_dir("demo");
  const auto path = write_formation_demo(dir.string());
  const auto cfg = load_config(path);
  CHECK_FALSE(cfg.psi_main_table.empty());
  CHECK(cfg.interface_r_outer.has_value());
  CHECK(std::filesystem::exists(cfg.resolve(cfg.psi_main_table)));
  CHECK(std::filesystem::exists(cfg.resolve(cfg.V_gun_waveform)));
  FormationDemo d;
  CHECK(stuffing_psi(d, {0.15, 0.1}) == 0.0);
  CHECK(stuffing_psi(d, {0.15, -0.35}) == d.stuffing_flux);
  CHECK(stuffing_psi(d, {0.15, -0.15}) == doctest::Approx(0.5 * d.stuffing_flux).epsilon(1e-14));
  std::filesystem::remove_all(dir);
}
