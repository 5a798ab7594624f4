#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "permbo/cli.hpp"

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result cli(std::vector<std::string> args) {
  args.insert(args.begin(), "permbo");
  std::ostringstream out, err;
  const int code = permbo::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST(Cli, LengthsTable) {
  const auto r = cli({"lengths", "--n", "15"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "n,enum,merge,mid,slide,shift,concat\n15,105,45,7,24,11,87\n");
  const auto range = cli({"lengths", "--from", "2", "--to", "5", "--window", "2"});
  ASSERT_EQ(range.code, 0) << range.err;
  EXPECT_EQ(std::count(range.out.begin(), range.out.end(), '\n'), 5);
}

TEST(Cli, Featurize) {
  auto r = cli({"featurize", "--perm", "1,0", "--map", "merge"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "1\n");
  r = cli({"featurize", "--perm", "0,1,2", "--map", "enum"});
  EXPECT_EQ(r.out, "-1,-1,-1\n");
  r = cli({"featurize", "--perm", "2,0,1,3", "--map", "shift", "--max_shift", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), ','), 2);
}

TEST(Cli, UsageErrors) {
  auto r = cli({"lengths", "--bogus"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("lengths"), std::string::npos);
  EXPECT_NE(r.err.find("Usage"), std::string::npos);
  EXPECT_EQ(cli({}).code, 1);
  EXPECT_EQ(cli({"featurize", "--perm", "0,0"}).code, 1);
  EXPECT_EQ(cli({"featurize", "--perm", "a,b"}).code, 1);
  EXPECT_EQ(cli({"featurize", "--perm", "0,1", "--map", "fourier"}).code, 1);
  EXPECT_EQ(cli({"lengths"}).code, 1);
  EXPECT_EQ(cli({"run", "--iterations", "zero"}).code, 1);
}

TEST(Cli, HelpForEverySubcommand) {
  for (std::string sub : {"run", "featurize", "oracle", "lengths"}) {
    const auto r = cli({sub, "--help"});
    EXPECT_EQ(r.code, 0) << sub;
    EXPECT_NE(r.out.find(sub), std::string::npos) << sub;
  }
  EXPECT_EQ(cli({"--help"}).code, 0);
}

TEST(Cli, Oracle) {
  const auto r = cli({"oracle", "--problem", "tsp", "--n", "5", "--instance_seed", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto obj = permbo::make_objective("t", permbo::generate_tsp(5, 2));
  const auto [perm, value] = permbo::brute_force_optimum(obj);
  EXPECT_NE(r.out.find("optimum=" + permbo::format_number(value) + "\n"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("problem=tsp-synthetic-n5-s2"), std::string::npos);
  EXPECT_EQ(cli({"oracle", "--n", "11"}).code, 2);
}

TEST(Cli, RunWritesOutputsWithPrecedence) {
  namespace fs = std::filesystem;
  const auto base = fs::temp_directory_path() / "permbo_test_cli";
  fs::remove_all(base);
  fs::create_directories(base);
  const auto cfg_path = base / "exp.cfg";
  {
    std::ofstream(cfg_path) << "problem = cp\nn = 5\niterations = 3\nrepeats = 2\ninitial_design = 3\n"
                               "restarts = 2\nwindow = 3\nkernels = merge,random\noutput = "
                            << (base / "from_file").string() << "\n";
  }

  ::setenv(permbo::cli::kOutputDirEnv, (base / "from_env").string().c_str(), 1);
  auto r = cli({"run", "--config", cfg_path.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(base / "from_env" / "aggregate.csv"));
  EXPECT_FALSE(fs::exists(base / "from_file"));
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), permbo::kAggregateCsvHeader);
  EXPECT_NE(r.out.find("\nrandom,cp-synthetic-n5-s1,"), std::string::npos) << r.out;

  r = cli({"run", "--config", cfg_path.string(), "--output", (base / "from_flag").string(), "--repeats", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(base / "from_flag" / "runs" / "merge_seed0.csv"));
  EXPECT_FALSE(fs::exists(base / "from_flag" / "runs" / "merge_seed1.csv"));
  ::unsetenv(permbo::cli::kOutputDirEnv);

  EXPECT_EQ(cli({"run", "--config", (base / "missing.cfg").string()}).code, 1);
  fs::remove_all(base);
}
