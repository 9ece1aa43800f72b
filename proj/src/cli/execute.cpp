#include <cstdlib>
#include <fstream>

#include "lsmooth/cli.hpp"
#include "lsmooth/errors.hpp"

namespace lsmooth {

namespace {

std::string cell(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

nlohmann::json optional_json(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

std::filesystem::path output_dir(const RunConfig& config) {
  if (const char* env = std::getenv(kOutputDirEnv); env != nullptr && *env != '\0') return env;
  return config.output_dir;
}

}  // namespace

void write_trace_csv(std::ostream& out, const std::vector<TraceRecord>& trace) {
  out << "k,phase,f_gap,grad_norm,gamma_cap,alpha,step_gamma,dist_to_opt,bound_gap,lyapunov,flags\n";
  for (const auto& r : trace) {
    out << r.k << ',' << (r.phase == Phase::gd ? "gd" : "agd") << ',' << cell(r.f_gap) << ','
        << format_double(r.grad_norm) << ',' << cell(r.gamma_cap) << ',' << cell(r.alpha) << ','
        << format_double(r.step_gamma) << ',' << cell(r.dist_to_opt) << ',' << cell(r.bound_gap)
        << ',' << cell(r.lyapunov) << ',' << r.flags << '\n';
  }
}

int exit_code(Termination t) {
  switch (t) {
    case Termination::converged:
      return kExitConverged;
    case Termination::budget:
      return kExitBudget;
    case Termination::precondition_failed:
      return kExitPrecondition;
  }
  return kExitFailure;
}

Execution run_config(const RunConfig& config) {
  const Problem problem = catalog(config.problem, config.problem_params);
  const EllModel model = config.model.value_or(problem.ell_model());
  RunOptions options;
  options.strict = config.strict_checks;
  options.m_bar = config.m_bar;
  nlohmann::json extra = nlohmann::json::object();

  if (config.estimate_m_bar) {
    options.m_bar = estimate_m_bar(problem, config.r_bar, 2000, config.seed);
    extra["m_bar"] = {{"value", *options.m_bar}, {"heuristic", true}};
  } else if (config.m_bar) {
    extra["m_bar"] = {{"value", *config.m_bar}, {"heuristic", false}};
  }

  Execution ex;
  switch (config.algorithm) {
    case Algorithm::gd:
      ex.result = gd_only_run(problem, model, config.x0, config.r_bar, config.epsilon, config.budget);
      break;
    case Algorithm::agd1: {
      const ExtendedReal delta = config.delta ? ExtendedReal(*config.delta)
                                              : select_delta(model, config.r_bar, options.m_bar);
      extra["delta_source"] = config.delta ? "config" : "select_delta";
      ex.result = algorithm1_run(problem, model, config.x0, delta, config.r_bar, config.epsilon,
                                 config.budget, options);
      break;
    }
    case Algorithm::agd2: {
      ex.result = algorithm2_run(problem, model, config.x0, *config.gamma_cap0, config.r_bar,
                                 config.epsilon, config.budget, options);
      const PsiProfile profile(model);
      extra["k_init"] = compute_k_init(profile, *config.gamma_cap0, config.r_bar);
      break;
    }
  }

  const RunResult& r = ex.result;
  long gd_rows = 0;
  long agd_rows = 0;
  for (const auto& row : r.trace) (row.phase == Phase::gd ? gd_rows : agd_rows)++;
  ex.summary = {{"config", config.to_json()},
                {"model", model.to_json()},
                {"reason", to_string(r.reason)},
                {"message", r.message},
                {"gd_iters", r.gd_iters},
                {"agd_iters", r.agd_iters},
                {"oracle_calls", {{"total", r.oracle_calls},
                                  {"initial", r.reason == Termination::precondition_failed ? 0 : 1},
                                  {"gd", gd_rows},
                                  {"agd", agd_rows}}},
                {"achieved_gap", optional_json(r.achieved_gap)},
                {"certified_bound", r.certified_bound},
                {"delta", r.delta},
                {"gamma_cap0", r.gamma_cap0},
                {"initial_value", r.initial_value},
                {"flags", r.flags},
                {"flag_names", describe_flags(r.flags)},
                {"warnings", r.warnings}};
  ex.summary.update(extra);
  return ex;
}

Execution execute(const RunConfig& config) {
  Execution ex = run_config(config);
  const auto dir = output_dir(config);
  std::filesystem::create_directories(dir);
  ex.trace_path = dir / config.trace_file;
  ex.summary_path = dir / config.summary_file;
  {
    std::ofstream f(ex.trace_path, std::ios::binary);
    if (!f) throw Error("cannot write " + ex.trace_path.string());
    write_trace_csv(f, ex.result.trace);
  }
  std::ofstream f(ex.summary_path, std::ios::binary);
  if (!f) throw Error("cannot write " + ex.summary_path.string());
  f << ex.summary.dump(2) << '\n';
  return ex;
}

SweepSpec SweepSpec::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigurationError("sweep spec must be an object", "");
  SweepSpec s;
  if (!j.contains("base") || !j.at("base").is_object()) {
    throw ConfigurationError("is required and must be an object", "base");
  }
  s.base = j.at("base");
  const auto axis = j.value("axis", std::string());
  if (axis == "epsilon") {
    s.axis = SweepAxis::epsilon;
  } else if (axis == "delta") {
    s.axis = SweepAxis::delta;
  } else if (axis == "gamma_cap0") {
    s.axis = SweepAxis::gamma_cap0;
  } else {
    throw ConfigurationError("must be one of epsilon, delta, gamma_cap0", "axis");
  }
  if (!j.contains("values") || !j.at("values").is_array()) {
    throw ConfigurationError("must be an array", "values");
  }
  for (std::size_t i = 0; i < j.at("values").size(); ++i) {
    const auto& v = j.at("values")[i];
    if (!v.is_number() || !(v.get<double>() > 0.0)) {
      throw ConfigurationError("must be a positive number", "values." + std::to_string(i));
    }
    s.values.push_back(v.get<double>());
  }
  if (s.values.empty()) throw ConfigurationError("grid is empty", "values");
  if (s.axis == SweepAxis::epsilon && s.values.size() < 2) {
    throw ConfigurationError("epsilon sweeps need at least 2 levels", "values");
  }
  RunConfig::from_json(s.base);  // validate the base once up front
  return s;
}

nlohmann::json sweep(const SweepSpec& spec, bool write_files) {
  const char* key = spec.axis == SweepAxis::epsilon ? "epsilon"
                    : spec.axis == SweepAxis::delta ? "delta"
                                                    : "gamma_cap0";
  nlohmann::json runs = nlohmann::json::array();
  std::vector<std::optional<long>> iterations;
  long violations = 0;
  for (std::size_t i = 0; i < spec.values.size(); ++i) {
    nlohmann::json doc = spec.base;
    doc[key] = spec.values[i];
    nlohmann::json entry{{key, spec.values[i]}};
    try {
      RunConfig config = RunConfig::from_json(doc);
      config.trace_file = "trace_" + std::to_string(i) + ".csv";
      config.summary_file = "summary_" + std::to_string(i) + ".json";
      const Execution ex = write_files ? execute(config) : run_config(config);
      const RunResult& r = ex.result;
      long flagged = 0;
      for (const auto& row : r.trace) flagged += row.flags != 0 ? 1 : 0;
      violations += flagged;
      entry.update({{"reason", to_string(r.reason)},
                    {"gd_iters", r.gd_iters},
                    {"agd_iters", r.agd_iters},
                    {"iterations", r.gd_iters + r.agd_iters},
                    {"oracle_calls", r.oracle_calls},
                    {"achieved_gap", optional_json(r.achieved_gap)},
                    {"flagged_rows", flagged}});
      iterations.push_back(r.reason == Termination::converged
                               ? std::optional<long>(r.gd_iters + r.agd_iters)
                               : std::nullopt);
    } catch (const std::exception& e) {
      entry["error"] = e.what();
      iterations.push_back(std::nullopt);
    }
    runs.push_back(entry);
  }
  nlohmann::json report{{"axis", key}, {"runs", runs}, {"flagged_rows_total", violations}};
  if (spec.axis == SweepAxis::epsilon) {
    nlohmann::json ratios = nlohmann::json::array();
    for (std::size_t i = 0; i + 1 < iterations.size(); ++i) {
      if (iterations[i] && iterations[i + 1] && *iterations[i] > 0) {
        ratios.push_back(static_cast<double>(*iterations[i + 1]) /
                         static_cast<double>(*iterations[i]));
      } else {
        ratios.push_back(nullptr);
      }
    }
    report["ratios"] = ratios;
  }
  return report;
}

}  // namespace lsmooth
