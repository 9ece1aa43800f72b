#include <cstdlib>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>

#include "lsmooth/cli.hpp"
#include "lsmooth/errors.hpp"
#include "lsmooth/verify.hpp"

namespace lsmooth {

namespace {

nlohmann::json load_json(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigurationError("cannot open '" + path + "'", "config");
  nlohmann::json j = nlohmann::json::parse(f, nullptr, false);
  if (j.is_discarded()) throw ConfigurationError("'" + path + "' is not valid JSON", "config");
  return j;
}

std::filesystem::path report_dir(const nlohmann::json& doc) {
  if (const char* env = std::getenv(kOutputDirEnv); env != nullptr && *env != '\0') return env;
  if (doc.contains("output") && doc["output"].contains("dir") && doc["output"]["dir"].is_string()) {
    return doc["output"]["dir"].get<std::string>();
  }
  return ".";
}

int cmd_run(const std::string& path, const std::vector<std::string>& overrides,
            std::ostream& out) {
  nlohmann::json doc = load_json(path);
  for (const auto& o : overrides) apply_override(doc, o);
  const RunConfig config = RunConfig::from_json(doc);
  const Execution ex = execute(config);
  out << to_string(ex.result.reason) << ": gd_iters=" << ex.result.gd_iters
      << " agd_iters=" << ex.result.agd_iters << " oracle_calls=" << ex.result.oracle_calls;
  if (ex.result.achieved_gap) out << " gap=" << format_double(*ex.result.achieved_gap);
  out << "\ntrace: " << ex.trace_path.string() << "\nsummary: " << ex.summary_path.string()
      << '\n';
  for (const auto& w : ex.result.warnings) out << "warning: " << w << '\n';
  if (!ex.result.message.empty()) out << ex.result.message << '\n';
  return exit_code(ex.result.reason);
}

int cmd_sweep(const std::string& path, const std::vector<std::string>& overrides,
              std::ostream& out) {
  nlohmann::json doc = load_json(path);
  for (const auto& o : overrides) apply_override(doc, o);
  const SweepSpec spec = SweepSpec::from_json(doc);
  const nlohmann::json report = sweep(spec);
  const auto dir = report_dir(spec.base);
  std::filesystem::create_directories(dir);
  std::ofstream f(dir / "sweep.json", std::ios::binary);
  f << report.dump(2) << '\n';
  out << report.dump(2) << '\n';
  return kExitConverged;
}

int cmd_verify(const std::string& name, const std::string& model_arg, long trials,
               std::uint64_t seed, const std::string& params, std::ostream& out) {
  nlohmann::json p = nlohmann::json::object();
  if (!params.empty()) {
    p = nlohmann::json::parse(params, nullptr, false);
    if (p.is_discarded()) throw ConfigurationError("must be a JSON object", "params");
  }
  const Problem problem = catalog(name, p);
  EllModel model = problem.ell_model();
  if (model_arg != "claimed") {
    const auto j = nlohmann::json::parse(model_arg, nullptr, false);
    if (j.is_discarded()) throw ConfigurationError("must be 'claimed' or a JSON model", "model");
    model = EllModel::from_json(j);
  }
  SweepOptions options;
  options.trials = trials;
  options.seed = seed;
  nlohmann::json reports = nlohmann::json::array();
  bool ok = true;
  for (const auto& r : verify_all(problem, model, options)) {
    reports.push_back(r.to_json());
    ok = ok && r.passed();
  }
  const nlohmann::json doc{{"problem", name}, {"model", model.to_json()}, {"reports", reports}};
  const auto dir = report_dir(nlohmann::json::object());
  std::filesystem::create_directories(dir);
  std::ofstream f(dir / "verify_report.json", std::ios::binary);
  f << doc.dump(2) << '\n';
  out << doc.dump(2) << '\n';
  return ok ? kExitConverged : kExitInvariant;
}

int cmd_catalog(std::ostream& out) {
  for (const auto& e : catalog_entries()) {
    out << e.name << "  " << e.description << "  defaults=" << e.default_params.dump() << '\n';
  }
  return kExitConverged;
}

}  // namespace

int cli_main(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Accelerated gradient methods under l-smoothness"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;
  auto* run = app.add_subcommand("run", "Run one configured solver");
  run->add_option("config", config_path, "JSON run config")->required();
  run->add_option("--set", overrides, "Override a key: path.to.key=value");

  std::string spec_path;
  auto* sw = app.add_subcommand("sweep", "Run a parameter sweep");
  sw->add_option("spec", spec_path, "JSON sweep spec")->required();
  sw->add_option("--set", overrides, "Override a key: path.to.key=value");

  std::string problem;
  std::string model = "claimed";
  std::string params;
  long trials = 1000;
  std::uint64_t seed = 0;
  auto* ver = app.add_subcommand("verify", "Randomized inequality checks on a catalog problem");
  ver->add_option("problem", problem, "Catalog name")->required();
  ver->add_option("model", model, "'claimed' or a JSON l-model");
  ver->add_option("--trials", trials, "Pairs per check")->check(CLI::PositiveNumber);
  ver->add_option("--seed", seed, "Random seed");
  ver->add_option("--params", params, "Problem parameters as JSON");

  auto* cat = app.add_subcommand("catalog", "Problem catalog");
  auto* list = cat->add_subcommand("list", "List problems");
  cat->require_subcommand(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o;
    std::ostringstream e2;
    const int rc = app.exit(e, o, e2);
    out << o.str();
    err << e2.str();
    return rc == 0 ? 0 : kExitConfiguration;
  }

  try {
    if (*run) return cmd_run(config_path, overrides, out);
    if (*sw) return cmd_sweep(spec_path, overrides, out);
    if (*ver) return cmd_verify(problem, model, trials, seed, params, out);
    if (*list) return cmd_catalog(out);
  } catch (const ConfigurationError& e) {
    err << "configuration error: " << e.what() << '\n';
    return kExitConfiguration;
  } catch (const InvariantViolation& e) {
    err << "invariant violation: " << e.what() << '\n';
    return kExitInvariant;
  } catch (const SafetyViolation& e) {
    err << "safety violation: " << e.what() << '\n';
    return kExitInvariant;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitFailure;
}

}  // namespace lsmooth
