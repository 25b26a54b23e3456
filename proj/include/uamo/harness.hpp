#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "uamo/core.hpp"

namespace uamo {

inline constexpr const char* kVersion = "0.1.0";

struct Column {
  std::string name;
  std::string unit;  // empty for dimensionless
  bool operator==(const Column&) const = default;
};

struct ResultTable {
  std::vector<Column> columns;
  std::vector<std::vector<double>> rows;
  std::vector<std::pair<std::string, std::string>> metadata;  // insertion ordered
  long violations = 0;  // acceptance-grade inequalities that failed; not serialized

  void add_column(std::string name, std::string unit = "");
  void add_row(std::vector<double> row);  // throws InvalidParameter on width mismatch
  void set_meta(const std::string& key, const std::string& value);
  void set_meta(const std::string& key, double value);
  std::string meta(const std::string& key) const;  // empty when absent
  std::vector<double> column(const std::string& name) const;
  long column_index(const std::string& name) const;  // -1 when absent
};

// Rows compared bitwise so NaN round-trips count as equal.
bool same_table(const ResultTable& a, const ResultTable& b);

std::string format_double(double v);  // 17 significant digits
std::string emit_csv(const ResultTable& t);
ResultTable parse_csv(const std::string& text);
std::string emit_json(const ResultTable& t);
ResultTable parse_json(const std::string& text);

enum class OutputFormat { Csv, Json };

struct ExperimentConfig {
  std::string command;

  double lambda1 = 0.5;
  double lambda2 = 0.9;
  std::string omega_spec = "golden";
  double omega = 0.0;  // resolved from omega_spec
  double theta = 0.13;

  long N = 500;
  long T = 1000;
  long record_every = 1;
  long n = 16;           // polynomial degree index for detpoly
  long grid = 0;         // 0 selects the command default
  long samples = 8;      // theta samples for lyapunov
  long trials = 100;     // random draws for check commands
  long depth = 20;       // continued fraction depth for arith
  double epsilon = 0.05;
  long y_lo = 300, y_hi = 700, y_step = 100;
  double z_phase = 0.25;  // z = e^{2 pi i z_phase}; negative selects a spectral point
  std::string kind = "all";
  std::string route = "cmv";
  std::string method = "dense";
  std::uint64_t seed = 20240229;

  std::string sweep_command;
  std::string sweep_param;
  std::vector<double> sweep_values;
  unsigned threads = 0;  // 0 selects available parallelism

  std::string output;  // empty writes to stdout, or to $UAMO_OUTPUT_DIR/<command>.<ext> when set
  OutputFormat format = OutputFormat::Csv;

  // Resolved config as ordered key/value pairs.
  std::vector<std::pair<std::string, std::string>> echo() const;
  // Throws ConfigError with a one-line remedy.
  void validate() const;
};

// argv[0] is skipped. Throws ConfigError on unknown flags, out-of-range values or conflicts.
ExperimentConfig parse_config(int argc, const char* const* argv);
ExperimentConfig parse_config(const std::vector<std::string>& args);

ResultTable run_experiment(const ExperimentConfig& cfg);

// splitmix64 of seed + (counter + 1) * golden gamma; one counter per sub-task.
std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t counter);

// Writes to cfg.output, $UAMO_OUTPUT_DIR, or stdout; returns the path written or "-".
std::string write_table(const ResultTable& t, const ExperimentConfig& cfg);

// 0 success, 2 config error, 3 numeric failure, 4 internal error.
int run_cli(int argc, const char* const* argv);

}  // namespace uamo
