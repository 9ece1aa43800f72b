#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "lsmooth/ell_model.hpp"
#include "lsmooth/problems.hpp"
#include "lsmooth/solvers.hpp"

namespace lsmooth {

enum class Algorithm { gd, agd1, agd2 };

/// One solver run, fully specified. Parsed from JSON; every default is
/// written back into the summary.
struct RunConfig {
  Algorithm algorithm = Algorithm::agd1;
  std::string problem;
  nlohmann::json problem_params = nlohmann::json::object();
  std::optional<EllModel> model;  // nullopt: the problem's claimed profile
  Vector x0;
  double epsilon = 1e-6;
  long budget = 100000;
  double r_bar = 0.0;
  std::optional<double> delta;       // agd1; else select_delta
  std::optional<double> gamma_cap0;  // agd2; required there
  std::optional<double> m_bar;       // superquadratic agd1
  bool estimate_m_bar = false;       // "m_bar": "estimate"
  bool strict_checks = true;
  std::uint64_t seed = 0;
  std::filesystem::path output_dir = ".";
  std::string trace_file = "trace.csv";
  std::string summary_file = "summary.json";

  static RunConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

/// Environment variable that overrides RunConfig::output_dir.
inline constexpr const char* kOutputDirEnv = "LSMOOTH_OUTPUT_DIR";

/// Applies `a.b.c=value` to a JSON document. The value is parsed as JSON
/// when possible and kept as a string otherwise.
void apply_override(nlohmann::json& doc, const std::string& assignment);

/// Shortest round-trip decimal; empty for nullopt.
std::string format_double(double v);

void write_trace_csv(std::ostream& out, const std::vector<TraceRecord>& trace);

struct Execution {
  RunResult result;
  nlohmann::json summary;
  std::filesystem::path trace_path;
  std::filesystem::path summary_path;
};

/// Runs the configured solver (without touching the file system).
Execution run_config(const RunConfig& config);

/// run_config plus the trace CSV and summary JSON in the output directory.
/// `LSMOOTH_OUTPUT_DIR` takes precedence over the configured directory.
Execution execute(const RunConfig& config);

enum class SweepAxis { epsilon, delta, gamma_cap0 };

struct SweepSpec {
  nlohmann::json base;  // RunConfig document
  SweepAxis axis = SweepAxis::epsilon;
  std::vector<double> values;

  static SweepSpec from_json(const nlohmann::json& j);
};

/// One run per grid value; child failures are recorded and the sweep goes on.
/// For the ε axis the report carries iterations(ε_{i+1}) / iterations(ε_i).
nlohmann::json sweep(const SweepSpec& spec, bool write_files = true);

/// Process exit codes.
inline constexpr int kExitConverged = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitBudget = 2;
inline constexpr int kExitPrecondition = 3;
inline constexpr int kExitConfiguration = 4;
inline constexpr int kExitInvariant = 5;

int exit_code(Termination t);

/// Entry point shared by the binary and the tests.
int cli_main(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace lsmooth
