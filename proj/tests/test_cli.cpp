#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "msde/config.hpp"

using namespace msde;
namespace fs = std::filesystem;

namespace {

const char* kHappy =
    "command=simulate\nmanifold=sphere\nn=3\nintegrator=ito-em\nT=2\nn_div=1000\nn_path=1000\n"
    "seed=7\ncost=phi_5_2\nout=run.csv\n";

fs::path scratch(const std::string& name) {
  fs::path d = fs::temp_directory_path() / ("msde_cli_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

void write(const fs::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

int run_binary(const fs::path& cfg, const std::string& extra, const fs::path& log) {
  const std::string cmd = std::string(MANIFOLD_SDE_BIN) + " " + cfg.string() + " " + extra + " > " +
                          log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(ParseConfig, HappyPath) {
  RunConfig c = parse_config(kHappy);
  EXPECT_EQ(c.command, Command::Simulate);
  EXPECT_EQ(c.manifold, "sphere");
  EXPECT_EQ(c.params.n, 3);
  ASSERT_EQ(c.integrators.size(), 1u);
  EXPECT_EQ(c.integrators[0], IntegratorId::ItoEm);
  EXPECT_EQ(*c.T, 2.0);
  EXPECT_EQ(c.n_div, std::vector<int>{1000});
  EXPECT_EQ(*c.n_path, 1000);
  EXPECT_EQ(*c.seed, 7u);
  EXPECT_EQ(c.costs, std::vector<std::string>{"phi_5_2"});
  EXPECT_EQ(c.out, "run.csv");
  EXPECT_DOUBLE_EQ(c.brownian_scale(), 1.0);
}

TEST(ParseConfig, CommentsAndWhitespace) {
  RunConfig c = parse_config("# header\n command = validate  # trailing\n\nmanifold=so\nN=3\n");
  EXPECT_EQ(c.command, Command::Validate);
  EXPECT_EQ(c.params.N, 3);
}

TEST(ParseConfig, MissingKeyIsNamed) {
  std::string text = kHappy;
  text.erase(text.find("T=2\n"), 4);
  try {
    parse_config(text);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("'T'"), std::string::npos) << e.what();
  }
}

TEST(ParseConfig, UnknownIntegratorListsValidIds) {
  std::string text = kHappy;
  text.replace(text.find("ito-em"), 6, "milstein");
  try {
    parse_config(text);
    FAIL();
  } catch (const ConfigError& e) {
    const std::string w = e.what();
    EXPECT_NE(w.find("milstein"), std::string::npos);
    EXPECT_NE(w.find("geodesic-walk"), std::string::npos);
    EXPECT_NE(w.find("line 4"), std::string::npos);
  }
}

TEST(ParseConfig, Rejections) {
  EXPECT_THROW(parse_config(std::string(kHappy) + "colour=red\n"), ConfigError);
  EXPECT_THROW(parse_config(std::string(kHappy) + "T=3\n"), ConfigError);
  EXPECT_THROW(parse_config(std::string(kHappy), {"n_path=0"}), ConfigError);
  EXPECT_THROW(parse_config(std::string(kHappy), {"T=abc"}), ConfigError);
  EXPECT_THROW(parse_config(std::string(kHappy), {"n_div=1.5"}), ConfigError);
  EXPECT_THROW(parse_config(std::string(kHappy), {"manifold=torus"}), ConfigError);
  EXPECT_THROW(parse_config(std::string(kHappy), {"cost=banana"}), ConfigError);
  EXPECT_THROW(parse_config(std::string(kHappy), {"n=1"}), ConfigError);
  EXPECT_THROW(parse_config("manifold=sphere\nn=3\n"), ConfigError);
  EXPECT_THROW(parse_config("command=launch\nmanifold=sphere\nn=3\n"), ConfigError);
  EXPECT_THROW(parse_config("command=validate\nmanifold sphere\n"), ConfigError);
  try {
    parse_config("command=validate\nmanifold=sphere\nn=3\nwobble=1\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("line 4"), std::string::npos);
  }
}

TEST(ParseConfig, OverridesApplyAfterFile) {
  RunConfig c = parse_config(kHappy, {"seed=11", "integrator=strat-heun"});
  EXPECT_EQ(*c.seed, 11u);
  EXPECT_EQ(c.integrators[0], IntegratorId::StratHeun);
}

TEST(ParseConfig, NormalizedFormRoundTrips) {
  const std::vector<std::string> texts = {
      kHappy,
      "command=compare\nmanifold=stiefel\nn=5\np=3\nalpha1=0.5\nT=0.5\nn_div=200,500\nn_path=10\n"
      "seed=1\ncost=sum_abs\nintegrator=ito-em,geodesic-walk\n",
      "command=uniform\nmanifold=so\nN=3\nmetric_seed=4\nintegrator=retractive-em\nn_div=700\n"
      "n_path=5\nseed=3\ncost=sum_abs,sq11\nr=2\nnorm_cap=100\n",
      "command=heat-kernel\nmanifold=sphere\nn=4\nT=2\ncost=phi_32_52\ndiffusion=0.4\nradius=3\n"};
  for (const auto& t : texts) {
    const std::string norm = normalized_config(parse_config(t));
    EXPECT_EQ(normalized_config(parse_config(norm)), norm);
  }
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(1e-20), "1e-20");
}

TEST(ParseConfig, CommandSpecificRules) {
  EXPECT_THROW(parse_config("command=heat-kernel\nmanifold=so\nN=3\nT=2\ncost=phi_5_2\n"), ConfigError);
  EXPECT_THROW(parse_config("command=heat-kernel\nmanifold=sphere\nn=3\nT=2\ncost=sum_abs\n"), ConfigError);
  RunConfig u = parse_config(
      "command=uniform\nmanifold=so\nN=3\nintegrator=ito-em\nn_div=10\nn_path=5\nseed=1\ncost=sq11\n");
  EXPECT_EQ(*u.T, 40.0);
  EXPECT_THROW(parse_config(std::string(kHappy), {"integrator=ito-em,strat-heun"}), ConfigError);
}

TEST(Run, HeatKernelPrintsReference) {
  RunConfig c = parse_config(
      "command=heat-kernel\nmanifold=sphere\nn=3\nT=2\ncost=phi_5_2\ndiffusion=0.4\nradius=3\n");
  std::ostringstream out, err;
  EXPECT_EQ(run(c, out, err), 0);
  EXPECT_NE(out.str().find("metric,mean,stderr,n_path,n_div,T,integrator,manifold"), std::string::npos);
  EXPECT_NE(out.str().find("0.299"), std::string::npos) << out.str();
}

TEST(Run, ValidateSphere) {
  std::ostringstream out, err;
  EXPECT_EQ(run(parse_config("command=validate\nmanifold=sphere\nn=3\n"), out, err), 0);
  EXPECT_EQ(out.str().find("FAIL"), std::string::npos) << out.str();
  EXPECT_NE(out.str().find("soo_residual"), std::string::npos);
}

TEST(Run, SimulateWritesConsistentCsv) {
  fs::path d = scratch("simulate");
  RunConfig c = parse_config(kHappy, {"n_path=50", "n_div=50", "out=" + (d / "run.csv").string()});
  std::ostringstream out, err;
  ASSERT_EQ(run(c, out, err), 0) << err.str();
  std::istringstream paths(slurp(d / "run.csv"));
  std::string line;
  std::getline(paths, line);
  EXPECT_EQ(line, "path_index,value");
  double sum = 0;
  int n = 0;
  while (std::getline(paths, line)) {
    const auto comma = line.find(',');
    EXPECT_EQ(std::stoi(line.substr(0, comma)), n);
    sum += std::strtod(line.c_str() + comma + 1, nullptr);
    ++n;
  }
  EXPECT_EQ(n, 50);
  std::istringstream summary(slurp(d / "run.summary.csv"));
  std::getline(summary, line);
  EXPECT_EQ(line, "metric,mean,stderr,n_path,n_div,T,integrator,manifold");
  std::getline(summary, line);
  const auto a = line.find(','), b = line.find(',', a + 1);
  const double mean = std::strtod(line.substr(a + 1, b - a - 1).c_str(), nullptr);
  EXPECT_NEAR(mean, sum / n, 1e-12);
  EXPECT_NE(line.find(",ito-em,sphere(3)"), std::string::npos) << line;
}

TEST(Run, StepFailureExitCode) {
  // With h * scale = 2000 each hyperbolic step leaves x_n > 0 about half the time, so some step
  // exhausts its resamples.
  RunConfig c = parse_config(
      "command=simulate\nmanifold=hyperbolic\nn=2\nintegrator=ito-em\nT=1\nn_div=1000\n"
      "n_path=4\nseed=1\ncost=abs11\ndiffusion=1e6\n");
  std::ostringstream out, err;
  EXPECT_EQ(run(c, out, err), 2);
  EXPECT_NE(err.str().find("path"), std::string::npos);
}

TEST(Run, UniformRejectsNoncompact) {
  RunConfig c = parse_config(
      "command=uniform\nmanifold=spd\nN=3\nintegrator=ito-em\nn_div=10\nn_path=5\nseed=1\ncost=abs11\n");
  std::ostringstream out, err;
  EXPECT_EQ(run(c, out, err), 3);
}

TEST(Binary, ExitCodesAndDeterminism) {
  fs::path d = scratch("binary");
  write(d / "sim.cfg", std::string(kHappy));
  const std::string o1 = "--set out=" + (d / "a.csv").string() + " --set n_path=40 --set n_div=40";
  const std::string o2 = "--set out=" + (d / "b.csv").string() + " --set n_path=40 --set n_div=40";
  EXPECT_EQ(run_binary(d / "sim.cfg", o1, d / "log1"), 0) << slurp(d / "log1");
  EXPECT_EQ(run_binary(d / "sim.cfg", o2 + " ", d / "log2"), 0);
  setenv("MANIFOLD_SDE_THREADS", "1", 1);
  const std::string o3 = "--set out=" + (d / "c.csv").string() + " --set n_path=40 --set n_div=40";
  EXPECT_EQ(run_binary(d / "sim.cfg", o3, d / "log3"), 0);
  unsetenv("MANIFOLD_SDE_THREADS");
  EXPECT_EQ(slurp(d / "a.csv"), slurp(d / "b.csv"));
  EXPECT_EQ(slurp(d / "a.csv"), slurp(d / "c.csv"));

  EXPECT_EQ(run_binary(d / "sim.cfg", "--set n_path=0", d / "log4"), 3);
  EXPECT_EQ(run_binary(d / "missing.cfg", "", d / "log5"), 3);
  write(d / "val.cfg", "command=validate\nmanifold=so\nN=3\n");
  EXPECT_EQ(run_binary(d / "val.cfg", "", d / "log6"), 0);
  write(d / "hk.cfg", "command=heat-kernel\nmanifold=sphere\nn=3\nT=2\ncost=phi_5_2\ndiffusion=0.4\nradius=3\n");
  EXPECT_EQ(run_binary(d / "hk.cfg", "", d / "log7"), 0);
  EXPECT_NE(slurp(d / "log7").find("0.299"), std::string::npos);
  EXPECT_EQ(run_binary(d / "hk.cfg", "--print-config", d / "log8"), 0);
  EXPECT_EQ(normalized_config(parse_config(slurp(d / "log8"))), slurp(d / "log8"));
}
