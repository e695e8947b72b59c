#include <gtest/gtest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "invasion/errors.hpp"
#include "invasion/sim_io.hpp"

using namespace invasion;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("invasion_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

int error_line(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.line();
  }
  return -1;
}

int cli(std::vector<std::string> args, std::string* out = nullptr, std::string* err = nullptr) {
  std::ostringstream o, e;
  const int rc = cli_main(args, o, e);
  if (out) *out = o.str();
  if (err) *err = e.str();
  return rc;
}

}  // namespace

TEST(ConfigText, Examples) {
  EXPECT_EQ(parse_config(""), SimConfig{});
  SimConfig eta;
  eta.eta = 0.06;
  EXPECT_EQ(parse_config("eta = 0.06"), eta);
  const SimConfig c = parse_config("# comment\n  refine_level=6  \nmu1_mode = ecm # trailing\nR_m = 0.2\n");
  EXPECT_EQ(c.refine_level, 6);
  EXPECT_EQ(c.mu1_mode, Mu1Mode::EcmDependent);
  EXPECT_EQ(c.R_m, 0.2);
}

TEST(ConfigText, ErrorsCarryLines) {
  EXPECT_EQ(error_line("k = 0.2\ndT = 0.1"), 1);
  EXPECT_EQ(error_line("dT = 0.1\n\nk = 0.2"), 3);
  EXPECT_EQ(error_line("eta = 0.1\nfoo = 1"), 2);
  EXPECT_EQ(error_line("eta = 0.1\neta = 0.2"), 2);
  EXPECT_EQ(error_line("eta 0.1"), 1);
  EXPECT_EQ(error_line("\neta = abc"), 2);
  EXPECT_EQ(error_line("refine_level = 6.5"), 1);
  EXPECT_EQ(error_line("mu1_mode = fast"), 1);
  EXPECT_EQ(error_line("eta ="), 1);
  EXPECT_EQ(error_line("dT = 0.3"), 0);  // clashes with the default T, which has no line
}

TEST(ConfigText, RoundTrip) {
  SimConfig c;
  c.T = 1.0 / 3.0 * 3;
  c.eta = 0.1 + 0.2;
  c.R_m = 0.123456789012345678;
  c.mu1_mode = Mu1Mode::EcmDependent;
  c.out_dir = "some dir/out";
  c.refine_level = 6;
  EXPECT_EQ(parse_config(print_config(c)), c);
  EXPECT_EQ(parse_config(print_config(SimConfig{})), SimConfig{});
  EXPECT_EQ(print_config(SimConfig{}).find("R_m"), std::string::npos);
}

TEST(Output, FieldsRowsAndDeterminism) {
  const GridMesh mesh = GridMesh::build(Vec2(0, 0), Vec2(8, 8), 1);
  MacroState s = initial_conditions(mesh, Vec2(4, 4), 1.5);
  const auto ls = init_levelset(mesh, Vec2(4, 4), 1.5);
  std::ostringstream a, b;
  write_fields(a, s, ls);
  write_fields(b, s, ls);
  const std::string text = a.str();
  EXPECT_EQ(text, b.str());
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 10);
  EXPECT_EQ(text.substr(0, 12), "x,y,c,v,phi\n");
}

TEST(Output, SnapshotAndCheckpoint) {
  SimConfig c;
  c.refine_level = 4;
  const fs::path dir = scratch("snap");
  Simulation sim(c);
  write_snapshot(sim.state(), sim.levelset(), sim.cuts(), 0, dir);
  const std::string first = slurp(fields_path(dir, 0));
  write_snapshot(sim.state(), sim.levelset(), sim.cuts(), 0, dir);
  EXPECT_EQ(slurp(fields_path(dir, 0)), first);
  EXPECT_FALSE(slurp(interface_path(dir, 0)).empty());

  const Checkpoint cp = read_checkpoint(fields_path(dir, 0), c, 0);
  for (std::size_t v = 0; v < sim.mesh().num_vertices(); ++v) {
    EXPECT_EQ(cp.c[v], sim.state().c[v]);
    EXPECT_EQ(cp.phi[v], sim.levelset().phi[v]);
  }
  SimConfig other = c;
  other.refine_level = 5;
  EXPECT_THROW(read_checkpoint(fields_path(dir, 0), other, 0), IoError);
  EXPECT_THROW(read_checkpoint(dir / "nope.csv", c, 0), IoError);
}

TEST(Output, RunTreeIsByteIdentical) {
  SimConfig c;
  c.refine_level = 5;
  c.T = 0.3;
  c.snapshot_every = 2;
  const fs::path a = scratch("tree_a"), b = scratch("tree_b");
  run_to_directory(c, {a, true});
  run_to_directory(c, {b, true});
  int files = 0;
  for (const auto& e : fs::directory_iterator(a)) {
    ++files;
    EXPECT_EQ(slurp(e.path()), slurp(b / e.path().filename())) << e.path();
  }
  EXPECT_TRUE(fs::exists(fields_path(a, 0)));
  EXPECT_TRUE(fs::exists(fields_path(a, 2)));
  EXPECT_TRUE(fs::exists(fields_path(a, 3)));
  EXPECT_FALSE(fs::exists(fields_path(a, 1)));
  EXPECT_TRUE(fs::exists(a / "micro_1.txt"));
  const std::string diag = slurp(diagnostics_path(a));
  EXPECT_EQ(diag.substr(0, diag.find('\n')), kDiagnosticsHeader);
  EXPECT_EQ(std::count(diag.begin(), diag.end(), '\n'), 5);
  EXPECT_GT(files, 8);
}

TEST(Cli, MissingConfig) {
  std::string err;
  EXPECT_EQ(cli({"--config", "missing.cfg"}, nullptr, &err), 2);
  EXPECT_NE(err.find("missing.cfg"), std::string::npos);
  EXPECT_EQ(err.rfind("error: usage:", 0), 0u);
}

TEST(Cli, UsageAndConfigErrors) {
  std::string err;
  EXPECT_EQ(cli({"--bogus"}, nullptr, &err), 2);
  EXPECT_EQ(cli({"--mu1-mode", "fast"}, nullptr, &err), 2);
  const fs::path dir = scratch("cli_cfg");
  std::ofstream(dir / "bad.cfg") << "eta = 0.1\nk = 0.5\n";
  EXPECT_EQ(cli({"--config", (dir / "bad.cfg").string()}, nullptr, &err), 2);
  EXPECT_NE(err.find("line 2"), std::string::npos);
  EXPECT_EQ(err.rfind("error: config:", 0), 0u);
  std::string out;
  EXPECT_EQ(cli({"--help"}, &out), 0);
  EXPECT_NE(out.find("--config"), std::string::npos);
}

TEST(Cli, SmokeRunAndOutputPrecedence) {
  const fs::path dir = scratch("cli_run");
  std::ofstream(dir / "run.cfg") << "T = 0.2\nout_dir = " << (dir / "from_cfg").string() << "\n";
  std::string out;
  ::setenv("SIM_OUT", (dir / "from_env").string().c_str(), 1);
  EXPECT_EQ(cli({"--config", (dir / "run.cfg").string(), "--refine", "5"}, &out), 0);
  EXPECT_TRUE(fs::exists(diagnostics_path(dir / "from_env")));
  EXPECT_FALSE(fs::exists(dir / "from_cfg"));
  EXPECT_EQ(out.rfind("done: steps=2", 0), 0u);

  EXPECT_EQ(cli({"--config", (dir / "run.cfg").string(), "--refine", "5", "--out",
                 (dir / "from_flag").string(), "--mu1-mode", "ecm", "--seedless"}),
            0);
  EXPECT_TRUE(fs::exists(diagnostics_path(dir / "from_flag")));
  ::unsetenv("SIM_OUT");
  EXPECT_EQ(cli({"--config", (dir / "run.cfg").string(), "--refine", "5"}), 0);
  EXPECT_TRUE(fs::exists(diagnostics_path(dir / "from_cfg")));
}

TEST(Cli, RuntimeAbortExitsOne) {
  const fs::path dir = scratch("cli_abort");
  std::ofstream(dir / "run.cfg") << "T = 1\nR = 3.7\nR_m = 0.1\nc_vel = 1e6\nrefine_level = 5\n"
                                 << "out_dir = " << (dir / "out").string() << "\n";
  std::string err;
  EXPECT_EQ(cli({"--config", (dir / "run.cfg").string()}, nullptr, &err), 1);
  EXPECT_EQ(err.rfind("error: runtime: step ", 0), 0u);
}
