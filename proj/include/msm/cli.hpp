#pragma once

#include <cstdint>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "msm/intertrade.hpp"
#include "msm/spectral.hpp"
#include "msm/tick_model.hpp"

namespace msm::cli {

// Bad flag, config line or parameter value; maps to exit code 2.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum ExitCode : int {
  kOk = 0,
  kChecksFailed = 1,
  kParse = 2,
  kNumeric = 3,
  kInsufficientData = 4,
};

using Settings = std::map<std::string, std::string>;

struct RunConfig {
  double d = 0.45;  // alpha = 1 - 2d
  double q = 0.1;
  double mu = 4.0;
  double b = 1.0;
  std::string dist = "ggd";
  double vartheta = 0.8;
  double beta = 2.0 / 3.0;
  double lambda = 1.0;
  QuadratureSpec quad;
  double T = 1e5;
  int seeds = 16;
  long long n = 100'000;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  std::string out;  // empty or "-" writes to standard output
  std::vector<double> delta_grid;
  std::vector<double> grid;  // abscissa for spectrum and kdelta
  bool has_grid = false;
  double delta = 1.0;
  long long max_lag = 20;
  std::string mode = "calendar";
  bool mc = false;
  bool full = false;

  double alpha() const { return 1.0 - 2.0 * d; }
  ModelParams model() const;
  IntertradeDist distribution() const;
};

// Known keys, shared by the config file and the flags.
const std::vector<std::string>& setting_keys();

Settings read_config_file(const std::string& path);
Settings parse_config_text(const std::string& text, const std::string& origin);
// Applies settings over defaults and checks every invariant.
RunConfig build_config(const Settings& s);

// "0.1,1,10" or "lo:hi:n[:log|lin]"
std::vector<double> parse_grid(const std::string& spec);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;
  void add(std::string name, std::vector<double> col);
  std::size_t rows() const { return columns.empty() ? 0 : columns.front().size(); }
};

std::string format_number(double v);
// shortest round-trip form, for column labels
std::string short_number(double v);
void write_csv(std::ostream& os, const Table& t);
void emit(const Table& t, const std::string& out);

const std::vector<std::string>& figure_ids();
Table run_figure(const std::string& id, const RunConfig& cfg);

struct Check {
  std::string check_name;
  double target = 0.0;
  double actual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};
std::vector<Check> run_validation(const RunConfig& cfg);
std::string validation_json(const std::vector<Check>& checks);

int run_command(const std::string& command, const RunConfig& cfg);

// Full entry point: parses argv, dispatches, maps exceptions to exit codes.
int main(int argc, char** argv);

}  // namespace msm::cli
