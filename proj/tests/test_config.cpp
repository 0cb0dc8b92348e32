#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "genrob/commands.hpp"
#include "genrob/config.hpp"
#include "genrob/errors.hpp"
#include "support.hpp"

using namespace genrob;
using namespace genrob::testing;

namespace fs = std::filesystem;

namespace {

const char* kMinimal = R"({
  "chain": {"gravity_mps2": [0, 0, -9.81], "joints": [{"type": "prismatic", "axis": [1, 0, 0]}]},
  "bodies": [{"sphere": {"mass_kg": 2.0, "radius_m": 1.0}}]
})";

std::string with_body(const std::string& body) {
  return R"({"chain": {"gravity_mps2": [0, 0, 0], "joints": [{"type": "prismatic", "axis": [1, 0, 0]}]},
             "bodies": [)" + body + "]}";
}

std::string error_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / ("genrob_test_" + name)) {
    fs::remove_all(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

int run(const std::string& cmd, const std::string& config, const fs::path& out,
        std::optional<std::uint64_t> seed = std::nullopt) {
  std::ostringstream o, e;
  return run_command(cmd, config, out.string(), seed, o, e);
}

}  // namespace

TEST(Config, MinimalDocument) {
  const Config c = parse_config(kMinimal);
  EXPECT_EQ(c.chain.dof(), 1);
  EXPECT_EQ(c.seed, 1u);
  EXPECT_FALSE(c.simulation);
  EXPECT_DOUBLE_EQ(evaluate_body(c.bodies[0], 0.0).phi.m, 2.0);
  EXPECT_THROW(make_scenario(c), ConfigError);
}

TEST(Config, UnknownKeysArePointered) {
  EXPECT_NE(error_of(with_body(R"({"sphere": {"mass_kg": 1, "radius_m": 1, "colour": 1}})")).find("/bodies/0/sphere"),
            std::string::npos);
  EXPECT_NE(error_of(with_body(R"({"sphere": {"mass_kg": 1, "radius_m": 1}}], "extra": [1)")).find("extra"),
            std::string::npos);
}

TEST(Config, RejectsBadValues) {
  EXPECT_FALSE(error_of("{not json").empty());
  EXPECT_FALSE(error_of(with_body(R"({"sphere": {"mass_kg": 1}})")).empty());
  EXPECT_FALSE(error_of(with_body(R"({"sphere": {"mass_kg": 1, "radius_m": 1}, "box": {}})")).empty());
  EXPECT_FALSE(error_of(with_body(R"({"sphere": {"mass_law": {"type": "cubic"}, "radius_m": 1}})")).empty());
  EXPECT_FALSE(error_of(with_body(R"({"particles": [{"position_m": [0,0,0], "mass_kg": 1, "mobility": 2}]})")).empty());
  // Wrong body count for the chain.
  EXPECT_FALSE(error_of(R"({"chain": {"gravity_mps2": [0,0,0], "joints": [{"type": "revolute"}]}, "bodies": []})")
                   .empty());
  // Tilted revolute axes are outside the supported chain class.
  EXPECT_THROW(parse_config(R"({"chain": {"gravity_mps2": [0,0,0], "joints": [{"type": "revolute", "axis": [1,0,0]}]},
                                "bodies": [{"sphere": {"mass_kg": 1, "radius_m": 1}}]})"),
               InvalidInput);
}

TEST(Config, BodyKinds) {
  const Config rigid = parse_config(with_body(
      R"({"rigid": {"mass_kg": 1, "first_moment_kgm": [0.1, 0, 0], "inertia_kgm2": [1, 2, 3, 0.1, 0.2, 0.3]}})"));
  const InertialParams p = evaluate_body(rigid.bodies[0], 0.0).phi;
  EXPECT_DOUBLE_EQ(p.I(0, 1), 0.1);
  EXPECT_DOUBLE_EQ(p.I(1, 2), 0.2);
  EXPECT_DOUBLE_EQ(p.I(0, 2), 0.3);
  EXPECT_DOUBLE_EQ(p.h(0), 0.1);

  const Config table = parse_config(with_body(R"({"params_table": {"times_s": [0, 1], "samples": [
      {"mass_kg": 1, "first_moment_kgm": [0,0,0], "inertia_kgm2": [1,1,1,0,0,0]},
      {"mass_kg": 3, "first_moment_kgm": [0,0,0], "inertia_kgm2": [1,1,1,0,0,0]}]}})"));
  EXPECT_DOUBLE_EQ(evaluate_body(table.bodies[0], 0.5).phi.m, 2.0);

  const Config law = parse_config(
      with_body(R"({"box": {"mass_law": {"type": "linear", "initial_kg": 1, "rate_kgps": 0.5}, "size_m": [1, 1, 1]}})"));
  EXPECT_DOUBLE_EQ(evaluate_body(law.bodies[0], 2.0).phi.m, 2.0);
  EXPECT_DOUBLE_EQ(evaluate_body(law.bodies[0], 2.0).phi_rate.m, 0.5);

  const Config cloud = parse_config(R"({"seed": 5, "chain": {"gravity_mps2": [0,0,0], "joints": [{"type": "prismatic"}]},
      "bodies": [{"random_cloud": {"count": 6, "mass_kg": 1.2, "radius_m": 0.3, "center_m": [0,0,0],
                  "mobility": 0.5, "velocity_amplitude_mps": 0.2, "omega_radps": 2.0, "mass_rate_kgps": 0.0}}]})");
  const BodyState s = evaluate_body(cloud.bodies[0], 0.3);
  EXPECT_NEAR(s.phi.m, 1.2, 1e-12);
  EXPECT_GT(s.psi.norm(), 0.0);
}

TEST(Config, TimeSpans) {
  const Config c = parse_config(R"({"chain": {"gravity_mps2": [0,0,0], "joints": [{"type": "prismatic"}]},
      "bodies": [{"sphere": {"mass_kg": 1, "radius_m": 1}}],
      "consistency": {"times_s": {"start_s": 0, "stop_s": 1, "count": 5}},
      "simulation": {"t_end_s": 2.0, "dt_s": 0.5}})");
  const auto t = consistency_times(c);
  ASSERT_EQ(t.size(), 5u);
  EXPECT_DOUBLE_EQ(t[1], 0.25);
  EXPECT_EQ(certify_times(c).size(), 21u);
  EXPECT_FALSE(error_of(R"({"chain": {"gravity_mps2": [0,0,0], "joints": [{"type": "prismatic"}]},
      "bodies": [{"sphere": {"mass_kg": 1, "radius_m": 1}}], "consistency": {"times_s": [1, 0]}})")
                   .empty());
}

TEST(Config, EveryBundledScenarioParses) {
  int count = 0;
  for (const auto& entry : fs::directory_iterator(GENROB_SCENARIO_DIR)) {
    if (entry.path().extension() != ".json") continue;
    EXPECT_NO_THROW(load_config(entry.path().string())) << entry.path();
    ++count;
  }
  EXPECT_GE(count, 10);
}

TEST(Config, MissingFileIsAnError) {
  EXPECT_THROW(load_config("/nonexistent/genrob.json"), InvalidInput);
}

TEST(Commands, ExitCodes) {
  TempDir dir("exit_codes");
  EXPECT_EQ(run("verify", scenario_path("pendulum_2r.json"), dir.path / "ok"), kExitOk);
  EXPECT_TRUE(fs::exists(dir.path / "ok" / "verify.json"));

  EXPECT_EQ(run("simulate", GENROB_FIXTURE_DIR "/malformed.json", dir.path / "bad"), kExitConfig);
  EXPECT_FALSE(fs::exists(dir.path / "bad"));

  EXPECT_EQ(run("verify", GENROB_FIXTURE_DIR "/fault_flip_h.json", dir.path / "fault"), kExitProperty);
  const std::string report = slurp(dir.path / "fault" / "verify.json");
  EXPECT_NE(report.find("\"lagrangian_oracle\""), std::string::npos);
  EXPECT_NE(report.find("\"passed\": false"), std::string::npos);

  EXPECT_EQ(run("certify", scenario_path("psi_only.json"), dir.path / "nocert"), kExitConfig);
  EXPECT_EQ(run("launch", scenario_path("pendulum_2r.json"), dir.path / "unknown"), kExitConfig);
}

TEST(Commands, NumericFailureLeavesNoOutput) {
  TempDir dir("numeric");
  const fs::path cfg = dir.path / "collapse.json";
  fs::create_directories(dir.path);
  std::ofstream(cfg) << R"({"chain": {"gravity_mps2": [0,0,0], "joints": [{"type": "prismatic"}]},
      "bodies": [{"sphere": {"mass_law": {"type": "linear", "initial_kg": 1, "rate_kgps": -1}, "radius_m": 1}}],
      "simulation": {"t_end_s": 2.0, "dt_s": 0.01, "torque": {"type": "constant", "value": [1]}}})";
  EXPECT_EQ(run("simulate", cfg.string(), dir.path / "out"), kExitNumeric);
  EXPECT_FALSE(fs::exists(dir.path / "out"));
}

TEST(Commands, ByteIdenticalReruns) {
  TempDir dir("determinism");
  for (const char* cmd : {"simulate", "certify", "verify", "consistency"}) {
    ASSERT_EQ(run(cmd, scenario_path("flowing_cloud.json"), dir.path / "a"), kExitOk) << cmd;
    ASSERT_EQ(run(cmd, scenario_path("flowing_cloud.json"), dir.path / "b"), kExitOk) << cmd;
  }
  for (const char* file : {"trajectory.csv", "summary.json", "certificate.json", "verify.json", "consistency.json"})
    EXPECT_EQ(slurp(dir.path / "a" / file), slurp(dir.path / "b" / file)) << file;
}

TEST(Commands, SeedOverrideChangesSampling) {
  TempDir dir("seed");
  ASSERT_EQ(run("verify", scenario_path("planar_3r.json"), dir.path / "a", 5), kExitOk);
  ASSERT_EQ(run("verify", scenario_path("planar_3r.json"), dir.path / "b", 6), kExitOk);
  const std::string a = slurp(dir.path / "a" / "verify.json"), b = slurp(dir.path / "b" / "verify.json");
  EXPECT_NE(a.find("\"seed\": 5"), std::string::npos);
  EXPECT_NE(a, b);
}

TEST(Commands, CsvLayout) {
  TempDir dir("csv");
  ASSERT_EQ(run("simulate", scenario_path("prismatic_sphere.json"), dir.path), kExitOk);
  std::istringstream csv(slurp(dir.path / "trajectory.csv"));
  std::string header, row;
  std::getline(csv, header);
  EXPECT_EQ(header, "t,q_1,qd_1,qdd_1,T_kin,U_pot,nu,E_total");
  int rows = 0;
  while (std::getline(csv, row)) ++rows;
  EXPECT_EQ(rows, 101);
}

TEST(Commands, ConsistencyReportFlagsNegativeMass) {
  TempDir dir("negative");
  const fs::path cfg = dir.path / "neg.json";
  fs::create_directories(dir.path);
  std::ofstream(cfg) << R"({"chain": {"gravity_mps2": [0,0,0], "joints": [{"type": "prismatic"}]},
      "bodies": [{"sphere": {"mass_law": {"type": "linear", "initial_kg": 1, "rate_kgps": -1}, "radius_m": 1}}],
      "consistency": {"times_s": [0, 0.5, 2]}})";
  ASSERT_EQ(run("consistency", cfg.string(), dir.path / "out"), kExitOk);
  const std::string rep = slurp(dir.path / "out" / "consistency.json");
  EXPECT_NE(rep.find("\"inconsistent_times_s\": [\n        2.0"), std::string::npos) << rep;
}
