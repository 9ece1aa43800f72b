#include "lsmooth/ell_model.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>

#include "lsmooth/errors.hpp"

namespace lsmooth {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require(bool ok, const std::string& field, const std::string& message) {
  if (!ok) throw ConfigurationError(message, field);
}

bool finite_nonneg(double x) { return std::isfinite(x) && x >= 0.0; }

double number_field(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number()) {
    throw ConfigurationError("missing or non-numeric field", std::string("model.") + key);
  }
  return j.at(key).get<double>();
}

}  // namespace

EllModel EllModel::constant(double L) {
  require(std::isfinite(L) && L > 0.0, "model.L", "L must be positive");
  return EllModel(ConstantEll{L});
}

EllModel EllModel::affine(double L0, double L1) {
  require(std::isfinite(L0) && L0 > 0.0, "model.L0", "L0 must be positive");
  require(finite_nonneg(L1), "model.L1", "L1 must be nonnegative");
  return EllModel(AffineEll{L0, L1});
}

EllModel EllModel::power(double rho, double L0, double L1) {
  require(finite_nonneg(rho), "model.rho", "rho must be nonnegative");
  require(std::isfinite(L0) && L0 > 0.0, "model.L0", "L0 must be positive");
  require(finite_nonneg(L1), "model.L1", "L1 must be nonnegative");
  return EllModel(PowerEll{rho, L0, L1});
}

EllModel EllModel::custom(std::vector<std::pair<double, double>> points) {
  require(!points.empty(), "model.points", "at least one breakpoint required");
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto [s, l] = points[i];
    require(finite_nonneg(s), "model.points", "breakpoint s must be nonnegative");
    require(std::isfinite(l) && l > 0.0, "model.points", "l(s) must be positive");
    if (i > 0) {
      require(s > points[i - 1].first, "model.points", "breakpoints must be strictly increasing in s");
      require(l >= points[i - 1].second, "model.points", "l(s) must be non-decreasing");
    }
  }
  return EllModel(CustomEll{std::move(points)});
}

EllModel EllModel::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string()) {
    throw ConfigurationError("expected an object with a string 'kind'", "model.kind");
  }
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "constant") return constant(number_field(j, "L"));
  if (kind == "affine") return affine(number_field(j, "L0"), number_field(j, "L1"));
  if (kind == "power") {
    return power(number_field(j, "rho"), number_field(j, "L0"), number_field(j, "L1"));
  }
  if (kind == "custom") {
    if (!j.contains("points") || !j.at("points").is_array()) {
      throw ConfigurationError("expected an array of [s, l] pairs", "model.points");
    }
    std::vector<std::pair<double, double>> points;
    for (const auto& p : j.at("points")) {
      if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
        throw ConfigurationError("each point must be [s, l]", "model.points");
      }
      points.emplace_back(p[0].get<double>(), p[1].get<double>());
    }
    return custom(std::move(points));
  }
  throw ConfigurationError("unknown model kind '" + kind + "'", "model.kind");
}

nlohmann::json EllModel::to_json() const {
  return std::visit(
      Overloaded{
          [](const ConstantEll& m) { return nlohmann::json{{"kind", "constant"}, {"L", m.L}}; },
          [](const AffineEll& m) {
            return nlohmann::json{{"kind", "affine"}, {"L0", m.L0}, {"L1", m.L1}};
          },
          [](const PowerEll& m) {
            return nlohmann::json{{"kind", "power"}, {"rho", m.rho}, {"L0", m.L0}, {"L1", m.L1}};
          },
          [](const CustomEll& m) {
            nlohmann::json pts = nlohmann::json::array();
            for (const auto& [s, l] : m.points) pts.push_back({s, l});
            return nlohmann::json{{"kind", "custom"}, {"points", pts}};
          },
      },
      v_);
}

double EllModel::operator()(double s) const {
  if (!(s >= 0.0)) throw DomainError("ell: argument must be nonnegative");
  return std::visit(
      Overloaded{
          [](const ConstantEll& m) { return m.L; },
          [s](const AffineEll& m) { return m.L0 + m.L1 * s; },
          [s](const PowerEll& m) { return m.L0 + m.L1 * std::pow(s, m.rho); },
          [s](const CustomEll& m) {
            const auto& pts = m.points;
            if (s <= pts.front().first) return pts.front().second;
            if (s >= pts.back().first) return pts.back().second;
            const auto hi = std::upper_bound(pts.begin(), pts.end(), s,
                                             [](double v, const auto& p) { return v < p.first; });
            const auto lo = std::prev(hi);
            const double w = (s - lo->first) / (hi->first - lo->first);
            return lo->second + w * (hi->second - lo->second);
          },
      },
      v_);
}

std::string EllModel::kind() const {
  return std::visit(Overloaded{
                        [](const ConstantEll&) { return std::string("constant"); },
                        [](const AffineEll&) { return std::string("affine"); },
                        [](const PowerEll&) { return std::string("power"); },
                        [](const CustomEll&) { return std::string("custom"); },
                    },
                    v_);
}

bool EllModel::is_superquadratic() const {
  const auto* p = std::get_if<PowerEll>(&v_);
  return p != nullptr && p->rho > 2.0 && p->L1 > 0.0;
}

bool EllModel::is_constant() const {
  return std::visit(Overloaded{
                        [](const ConstantEll&) { return true; },
                        [](const AffineEll& m) { return m.L1 == 0.0; },
                        [](const PowerEll& m) { return m.L1 == 0.0 || m.rho == 0.0; },
                        [](const CustomEll& m) {
                          return m.points.front().second == m.points.back().second;
                        },
                    },
                    v_);
}

double ell_eval(const EllModel& model, double s) { return model(s); }

}  // namespace lsmooth
