#include <algorithm>
#include <charconv>
#include <cmath>
#include <iterator>

#include "lsmooth/cli.hpp"
#include "lsmooth/errors.hpp"

namespace lsmooth {

namespace {

const nlohmann::json* find(const nlohmann::json& j, const char* key) {
  const auto it = j.find(key);
  return it == j.end() || it->is_null() ? nullptr : &*it;
}

double number(const nlohmann::json& v, const std::string& field) {
  if (!v.is_number()) throw ConfigurationError("must be a number", field);
  return v.get<double>();
}

double positive(const nlohmann::json& v, const std::string& field) {
  const double x = number(v, field);
  if (!(x > 0.0) || !std::isfinite(x)) throw ConfigurationError("must be positive", field);
  return x;
}

Algorithm parse_algorithm(const nlohmann::json& v) {
  if (v == "gd") return Algorithm::gd;
  if (v == "agd1") return Algorithm::agd1;
  if (v == "agd2") return Algorithm::agd2;
  throw ConfigurationError("must be one of gd, agd1, agd2", "algorithm");
}

std::string algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::gd:
      return "gd";
    case Algorithm::agd1:
      return "agd1";
    case Algorithm::agd2:
      return "agd2";
  }
  return "?";
}

}  // namespace

RunConfig RunConfig::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigurationError("config must be an object", "");
  static const char* known[] = {"algorithm", "problem", "model",  "x0",     "epsilon",
                                "budget",    "r_bar",   "delta",  "gamma_cap0",
                                "m_bar",     "strict_checks",     "seed", "output"};
  for (const auto& [key, value] : j.items()) {
    if (std::find(std::begin(known), std::end(known), key) == std::end(known)) {
      throw ConfigurationError("unknown key", key);
    }
  }
  RunConfig c;
  const auto* alg = find(j, "algorithm");
  if (!alg) throw ConfigurationError("is required", "algorithm");
  c.algorithm = parse_algorithm(*alg);

  const auto* prob = find(j, "problem");
  if (!prob) throw ConfigurationError("is required", "problem");
  if (prob->is_string()) {
    c.problem = prob->get<std::string>();
  } else if (prob->is_object() && prob->contains("name") && prob->at("name").is_string()) {
    c.problem = prob->at("name").get<std::string>();
    if (const auto* params = find(*prob, "params")) {
      if (!params->is_object()) throw ConfigurationError("must be an object", "problem.params");
      c.problem_params = *params;
    }
  } else {
    throw ConfigurationError("must be a name or {name, params}", "problem");
  }

  if (const auto* m = find(j, "model")) {
    if (!(m->is_string() && *m == "claimed")) {
      try {
        c.model = EllModel::from_json(*m);
      } catch (const ConfigurationError& e) {
        throw ConfigurationError(e.what(), "model");
      }
    }
  }

  const auto* x0 = find(j, "x0");
  if (!x0) throw ConfigurationError("is required", "x0");
  if (!x0->is_array() || x0->empty()) throw ConfigurationError("must be a nonempty array", "x0");
  c.x0.resize(static_cast<Eigen::Index>(x0->size()));
  for (std::size_t i = 0; i < x0->size(); ++i) {
    c.x0[static_cast<Eigen::Index>(i)] = number((*x0)[i], "x0." + std::to_string(i));
  }

  if (const auto* v = find(j, "epsilon")) c.epsilon = positive(*v, "epsilon");
  if (const auto* v = find(j, "budget")) {
    if (!v->is_number_integer() || v->get<long>() < 1) {
      throw ConfigurationError("must be an integer >= 1", "budget");
    }
    c.budget = v->get<long>();
  }
  const auto* r = find(j, "r_bar");
  if (!r) throw ConfigurationError("is required", "r_bar");
  c.r_bar = positive(*r, "r_bar");
  if (const auto* v = find(j, "delta")) c.delta = positive(*v, "delta");
  if (const auto* v = find(j, "gamma_cap0")) c.gamma_cap0 = positive(*v, "gamma_cap0");
  if (const auto* v = find(j, "m_bar")) {
    if (v->is_string() && *v == "estimate") {
      c.estimate_m_bar = true;
    } else {
      c.m_bar = number(*v, "m_bar");
      if (!(*c.m_bar >= 0.0)) throw ConfigurationError("must be nonnegative", "m_bar");
    }
  }
  if (const auto* v = find(j, "strict_checks")) {
    if (!v->is_boolean()) throw ConfigurationError("must be a boolean", "strict_checks");
    c.strict_checks = v->get<bool>();
  }
  if (const auto* v = find(j, "seed")) {
    if (!v->is_number_unsigned()) throw ConfigurationError("must be a nonnegative integer", "seed");
    c.seed = v->get<std::uint64_t>();
  }
  if (const auto* out = find(j, "output")) {
    if (!out->is_object()) throw ConfigurationError("must be an object", "output");
    const auto str = [&](const char* key, const std::string& fallback) {
      const auto* v = find(*out, key);
      if (!v) return fallback;
      if (!v->is_string()) throw ConfigurationError("must be a string", std::string("output.") + key);
      return v->get<std::string>();
    };
    c.output_dir = str("dir", ".");
    c.trace_file = str("trace", c.trace_file);
    c.summary_file = str("summary", c.summary_file);
  }
  if (c.algorithm == Algorithm::agd2 && !c.gamma_cap0) {
    throw ConfigurationError("is required for agd2", "gamma_cap0");
  }
  // Resolve the problem early so an unknown name or bad parameter is a
  // configuration error rather than a run failure.
  const Problem p = catalog(c.problem, c.problem_params);
  if (static_cast<std::size_t>(c.x0.size()) != p.dimension()) {
    throw ConfigurationError("has dimension " + std::to_string(c.x0.size()) + ", problem expects " +
                                 std::to_string(p.dimension()),
                             "x0");
  }
  return c;
}

nlohmann::json RunConfig::to_json() const {
  nlohmann::json j{{"algorithm", algorithm_name(algorithm)},
                   {"problem", {{"name", problem}, {"params", problem_params}}},
                   {"model", model ? model->to_json() : nlohmann::json("claimed")},
                   {"x0", std::vector<double>(x0.data(), x0.data() + x0.size())},
                   {"epsilon", epsilon},
                   {"budget", budget},
                   {"r_bar", r_bar},
                   {"strict_checks", strict_checks},
                   {"seed", seed},
                   {"output",
                    {{"dir", output_dir.string()},
                     {"trace", trace_file},
                     {"summary", summary_file}}}};
  j["delta"] = delta ? nlohmann::json(*delta) : nlohmann::json(nullptr);
  j["gamma_cap0"] = gamma_cap0 ? nlohmann::json(*gamma_cap0) : nlohmann::json(nullptr);
  if (estimate_m_bar) {
    j["m_bar"] = "estimate";
  } else {
    j["m_bar"] = m_bar ? nlohmann::json(*m_bar) : nlohmann::json(nullptr);
  }
  return j;
}

void apply_override(nlohmann::json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigurationError("override must look like key.path=value", assignment);
  }
  const std::string path = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);
  std::string pointer;
  std::size_t start = 0;
  while (start <= path.size()) {
    const auto dot = path.find('.', start);
    const auto part = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty()) throw ConfigurationError("empty path segment", path);
    pointer += "/" + part;
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  nlohmann::json value = nlohmann::json::parse(raw, nullptr, false);
  if (value.is_discarded()) value = raw;
  try {
    doc[nlohmann::json::json_pointer(pointer)] = value;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigurationError(e.what(), path);
  }
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace lsmooth
