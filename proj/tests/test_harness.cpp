#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "uamo/arithmetic.hpp"
#include "uamo/harness.hpp"

using namespace uamo;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("uamo_test_" + name)).string();
}

}  // namespace

TEST_CASE("flags are echoed into the config") {
  const ExperimentConfig c = parse_config({"lyapunov", "--l1", "0.6", "--l2", "0.8", "--omega", "golden", "--N", "100000"});
  CHECK(c.command == "lyapunov");
  CHECK(c.lambda1 == 0.6);
  CHECK(c.lambda2 == 0.8);
  CHECK(c.omega == kGolden);
  CHECK(c.N == 100000);
}

TEST_CASE("invalid configurations are rejected with a remedy") {
  CHECK_THROWS_AS(parse_config({"lyapunov", "--l1", "1.5"}), ConfigError);
  CHECK_THROWS_AS(parse_config({"lyapunov", "--bogus", "1"}), ConfigError);
  CHECK_THROWS_AS(parse_config({"nonsense"}), ConfigError);
  CHECK_THROWS_AS(parse_config({"spectrum", "--N", "5000"}), ConfigError);
  CHECK_THROWS_AS(parse_config({"lyapunov", "--sweep-param", "l1"}), ConfigError);
  CHECK_THROWS_AS(parse_config({"sweep", "--sweep-command", "evolve"}), ConfigError);
  CHECK_THROWS_AS(parse_config({"arith", "--omega", "x/y"}), ConfigError);
  try {
    parse_config({"lyapunov", "--l1", "1.5"});
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("--help") != std::string::npos);
  }
}

TEST_CASE("config file merges under command line flags") {
  const std::string path = temp_path("cfg.toml");
  {
    std::ofstream f(path);
    f << "l1 = 0.3\nl2 = 0.8\ntheta = 0.2\n";
  }
  const ExperimentConfig c = parse_config({"evolve", "--config", path, "--l2", "0.9"});
  CHECK(c.lambda1 == 0.3);
  CHECK(c.lambda2 == 0.9);
  CHECK(c.theta == 0.2);
  const ExperimentConfig again = parse_config({"evolve", "--config", path, "--l2", "0.9"});
  CHECK(again.echo() == c.echo());
  {
    std::ofstream f(path);
    f << "l1 = 0.3\nunknown_key = 4\n";
  }
  CHECK_THROWS_AS(parse_config({"evolve", "--config", path}), ConfigError);
  std::filesystem::remove(path);
}

TEST_CASE("CSV and JSON round trips") {
  ResultTable t;
  t.add_column("x", "site");
  t.add_column("v");
  t.add_row({1.0, 0.1});
  t.add_row({-2.5e-300, 1.0 / 3.0});
  t.add_row({NAN, INFINITY});
  t.set_meta("note", "a b; c");
  CHECK(same_table(parse_csv(emit_csv(t)), t));
  CHECK(same_table(parse_json(emit_json(t)), t));
  CHECK(emit_csv(parse_csv(emit_csv(t))) == emit_csv(t));
  CHECK_THROWS_AS(t.add_row({1.0}), InvalidParameter);
}

TEST_CASE("tables embed the resolved config and are reproducible") {
  const ExperimentConfig c = parse_config({"detpoly", "--n", "16", "--trials", "4"});
  const ResultTable a = run_experiment(c), b = run_experiment(c);
  CHECK(emit_csv(a) == emit_csv(b));
  CHECK(a.meta("config.n") == "16");
  CHECK(a.meta("config.omega") == format_double(kGolden));
  for (double m : a.column("tail_mass")) CHECK(m <= 1e-8);
  CHECK(a.violations == 0);
}

TEST_CASE("cocycle-check over 100 seeds") {
  const ResultTable t = run_experiment(parse_config({"cocycle-check", "--trials", "100"}));
  CHECK(t.rows.size() == 100);
  double worst = 0.0;
  for (double v : t.column("r_ss")) worst = std::max(worst, v);
  for (double v : t.column("r_a")) worst = std::max(worst, v);
  CHECK(worst <= 1e-12);
}

TEST_CASE("evolve at t = 0") {
  const ResultTable t = run_experiment(parse_config({"evolve", "--T", "0", "--N", "200"}));
  REQUIRE(t.rows.size() == 1);
  CHECK(t.column("x2")[0] == 0.0);
}

TEST_CASE("other commands produce rectangular tables") {
  for (auto args : std::vector<std::vector<std::string>>{{"spectrum", "--N", "64"},
                                                          {"lyapunov", "--N", "2000", "--samples", "2"},
                                                          {"green", "--N", "40"},
                                                          {"arith", "--depth", "12"},
                                                          {"localize", "--N", "400"}}) {
    const ResultTable t = run_experiment(parse_config(args));
    CHECK(!t.rows.empty());
    for (const auto& r : t.rows) CHECK(r.size() == t.columns.size());
  }
}

TEST_CASE("sweep rows follow grid order regardless of threads") {
  const std::vector<std::string> base = {"sweep", "--sweep-command", "lyapunov", "--sweep-param", "l2",
                                         "--sweep-values", "0.9,0.6,0.8", "--N", "2000", "--kind", "szego2"};
  std::vector<std::string> one = base, three = base;
  one.insert(one.end(), {"--threads", "1"});
  three.insert(three.end(), {"--threads", "3"});
  const ResultTable a = run_experiment(parse_config(one)), b = run_experiment(parse_config(three));
  CHECK(a.rows == b.rows);
  CHECK(a.column("grid_index") == std::vector<double>{0, 1, 2});
  CHECK(a.column("l2") == std::vector<double>{0.9, 0.6, 0.8});
}

TEST_CASE("seed splitting is deterministic and distinct") {
  CHECK(sub_seed(1, 0) == sub_seed(1, 0));
  CHECK(sub_seed(1, 0) != sub_seed(1, 1));
  CHECK(sub_seed(1, 0) != sub_seed(2, 0));
}

TEST_CASE("exit codes") {
  const std::string out = temp_path("out.csv");
  const char* ok[] = {"uamo-lab", "evolve", "--T", "0", "--N", "200", "-o", out.c_str()};
  CHECK(run_cli(8, ok) == 0);
  CHECK(parse_csv([&] {
          std::ifstream f(out);
          return std::string(std::istreambuf_iterator<char>(f), {});
        }())
            .rows.size() == 1);
  std::filesystem::remove(out);
  const char* bad[] = {"uamo-lab", "evolve", "--l1", "2"};
  CHECK(run_cli(4, bad) == 2);
  // lambda1 = 0 makes the closed-form rate diverge.
  const char* numeric[] = {"uamo-lab", "localize", "--l1", "0", "--N", "200", "-o", out.c_str()};
  CHECK(run_cli(8, numeric) == 3);
  std::filesystem::remove(out);
}

TEST_CASE("output directory from the environment") {
  const std::string dir = temp_path("outdir");
  setenv("UAMO_OUTPUT_DIR", dir.c_str(), 1);
  const ExperimentConfig c = parse_config({"arith", "--depth", "5"});
  const std::string where = write_table(run_experiment(c), c);
  unsetenv("UAMO_OUTPUT_DIR");
  CHECK(where == (std::filesystem::path(dir) / "arith.csv").string());
  CHECK(std::filesystem::exists(where));
  std::filesystem::remove_all(dir);
}
