#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "commands.hpp"

namespace fs = std::filesystem;
using namespace ionjch::cli;

namespace {

const fs::path kConfigs = IONJCH_CONFIG_DIR;

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("ionjch_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int run(std::vector<std::string> args) {
    out_.str("");
    err_.str("");
    return run_cli(args, out_, err_);
  }
  fs::path write_config(const std::string& name, const std::string& text) const {
    const auto p = dir_ / name;
    std::ofstream(p) << text;
    return p;
  }
  static std::string slurp(const fs::path& p) {
    std::ifstream is(p);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
  }
  static std::string first_data_line(const fs::path& p) {
    std::ifstream is(p);
    std::string line;
    while (std::getline(is, line))
      if (!line.empty() && line[0] != '#') return line;
    return {};
  }

  fs::path dir_;
  std::ostringstream out_, err_;
};

}  // namespace

TEST(Sweep, Parse) {
  const auto s = parse_sweep("g_y_khz:10:20:11");
  EXPECT_EQ(s.key, "g_y_khz");
  ASSERT_EQ(s.values().size(), 11u);
  EXPECT_DOUBLE_EQ(s.values()[10], 20.0);
  EXPECT_DOUBLE_EQ(parse_sweep("delta_khz:-1:1:1").values()[0], -1.0);
  EXPECT_ANY_THROW(parse_sweep("g_y_khz:10:20"));
  EXPECT_ANY_THROW(parse_sweep("g_y_khz:10:20:0"));
}

TEST_F(Cli, CrystalWritesTwentyOneRows) {
  const auto out = dir_ / "c";
  ASSERT_EQ(run({"crystal", "--config", (kConfigs / "crystal21.cfg").string(), "--out", out.string(), "--svg"}), kExitOk)
      << err_.str();
  std::ifstream is(out / "crystal.csv");
  std::string header, line;
  std::getline(is, header);
  EXPECT_EQ(header, "j,k,u_j,t_x_khz,t_y_khz,dw_x_khz,dw_y_khz");
  int rows = 0;
  while (std::getline(is, line)) rows += !line.empty();
  EXPECT_EQ(rows, 21);
  EXPECT_TRUE(fs::exists(out / "crystal.svg"));
  const auto manifest = slurp(out / "manifest.txt");
  EXPECT_NE(manifest.find("command = crystal"), std::string::npos);
  EXPECT_NE(manifest.find("crystal.csv"), std::string::npos);
}

TEST_F(Cli, OutputIsDeterministic) {
  const auto cfg = (kConfigs / "three_ion_xxz.cfg").string();
  ASSERT_EQ(run({"couplings", "--config", cfg, "--out", (dir_ / "a").string()}), kExitOk) << err_.str();
  ASSERT_EQ(run({"couplings", "--config", cfg, "--out", (dir_ / "b").string()}), kExitOk) << err_.str();
  EXPECT_EQ(slurp(dir_ / "a" / "couplings.csv"), slurp(dir_ / "b" / "couplings.csv"));
  EXPECT_EQ(slurp(dir_ / "a" / "fields.csv"), slurp(dir_ / "b" / "fields.csv"));
  EXPECT_EQ(first_data_line(dir_ / "a" / "couplings.csv"), "j,k,xy_khz,z_khz,lambda,W_jk_khz,W_kj_khz,V_khz,v_p1_khz,v_m1_khz");
}

TEST_F(Cli, SpectrumDefaultAndSweep) {
  const auto cfg = (kConfigs / "three_ion_xxz.cfg").string();
  ASSERT_EQ(run({"spectrum", "--config", cfg, "--out", dir_.string(), "--sweep", "delta_khz:-50:50:11"}), kExitOk)
      << err_.str();
  const auto text = slurp(dir_ / "spectrum.csv");
  EXPECT_EQ(text.substr(0, text.find(',')), "delta_khz");
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 12);
  EXPECT_EQ(run({"spectrum", "--config", cfg, "--out", dir_.string(), "--sweep", "g_x_khz:1:2:3"}), kExitConfig);
}

TEST_F(Cli, CouplingsLambdaSweep) {
  ASSERT_EQ(run({"couplings", "--config", (kConfigs / "anisotropy_gy.cfg").string(), "--out", dir_.string(), "--sweep",
                 "g_y_khz:12:30:7"}),
            kExitOk)
      << err_.str();
  const auto text = slurp(dir_ / "lambda_sweep.csv");
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 8);
}

TEST_F(Cli, EvolveAndCompare) {
  const auto cfg = write_config("pair.cfg",
                                "n_ions = 2\nt_x_khz = 0.1\nt_y_khz = 0.17\ng_x_khz = 32\ng_y_khz = 34\n"
                                "delta_khz = 0\nn_excitations = 2\ninitial_state = 1,-1\nt_final_ms = 5\nn_steps = 10\n");
  ASSERT_EQ(run({"evolve", "--config", cfg.string(), "--out", (dir_ / "e").string(), "--model", "effective"}), kExitOk)
      << err_.str();
  EXPECT_EQ(first_data_line(dir_ / "e" / "populations.csv"), "t_ms,pm,00,mp");
  ASSERT_EQ(run({"compare", "--config", cfg.string(), "--out", (dir_ / "c").string()}), kExitOk) << err_.str();
  EXPECT_TRUE(fs::exists(dir_ / "c" / "comparison.csv"));
  EXPECT_NE(slurp(dir_ / "c" / "report.txt").find("max_abs_deviation"), std::string::npos);
  EXPECT_EQ(run({"evolve", "--config", cfg.string(), "--out", dir_.string(), "--model", "bogus"}), kExitConfig);
}

TEST_F(Cli, ConfigErrorsExitTwo) {
  EXPECT_EQ(run({"crystal", "--config", (dir_ / "missing.cfg").string(), "--out", dir_.string()}), kExitConfig);
  const auto bad = write_config("bad.cfg", "n_ions = 3\nnu_z_khz = 0\naspect_x = 50\naspect_y = 100\n");
  EXPECT_EQ(run({"crystal", "--config", bad.string(), "--out", dir_.string()}), kExitConfig);
  EXPECT_NE(err_.str().find("nu_z_khz"), std::string::npos);
  EXPECT_EQ(run({}), kExitConfig);
  EXPECT_EQ(run({"crystal"}), kExitConfig);
  EXPECT_EQ(run({"crystal", "--config", bad.string(), "--sweep", "oops"}), kExitConfig);
}

TEST_F(Cli, NumericalFailureExitsThree) {
  const auto cfg = write_config("cap.cfg",
                                "n_ions = 3\nt_x_khz = 0.5\nt_y_khz = 0.7\ng_x_khz = 12\ng_y_khz = 18\n"
                                "delta_khz = 0\ninitial_state = udu\nmax_dim = 10\n");
  EXPECT_EQ(run({"compare", "--config", cfg.string(), "--out", dir_.string()}), kExitNumerical);
  const auto degenerate = write_config("deg.cfg", "n_ions = 2\nt_x_khz = 0.5\nt_y_khz = 0.7\ng_x_khz = 0\ng_y_khz = 0\n"
                                                  "delta_khz = 0\n");
  EXPECT_EQ(run({"couplings", "--config", degenerate.string(), "--out", dir_.string()}), kExitNumerical) << err_.str();
}
