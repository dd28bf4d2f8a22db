#include "sqe/bound_result.hpp"

#include <cmath>
#include <limits>

namespace sqe {
namespace {

// JSON has no infinity literal; the unbounded sentinel travels as a string.
nlohmann::json number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double read_number(const nlohmann::json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw nlohmann::json::type_error::create(302, "expected number, got '" + s + "'", &j);
  }
  return j.get<double>();
}

}  // namespace

void to_json(nlohmann::json& j, const BoundResult& r) {
  nlohmann::json params = nlohmann::json::object();
  for (const auto& [k, v] : r.params) params[k] = number(v);
  nlohmann::json trace = nlohmann::json::array();
  for (double v : r.trace) trace.push_back(number(v));
  j = nlohmann::json{{"name", r.name},
                     {"value", number(r.value)},
                     {"params", params},
                     {"argmin", r.argmin},
                     {"trace", trace},
                     {"evaluations", r.evaluations},
                     {"budget_exhausted", r.budget_exhausted},
                     {"caveat", r.caveat}};
}

void from_json(const nlohmann::json& j, BoundResult& r) {
  r.name = j.at("name").get<std::string>();
  r.value = read_number(j.at("value"));
  r.params.clear();
  for (const auto& [k, v] : j.at("params").items()) r.params[k] = read_number(v);
  r.argmin = j.at("argmin").get<std::vector<double>>();
  r.trace.clear();
  for (const auto& v : j.at("trace")) r.trace.push_back(read_number(v));
  r.evaluations = j.at("evaluations").get<long>();
  r.budget_exhausted = j.at("budget_exhausted").get<bool>();
  r.caveat = j.at("caveat").get<std::string>();
}

}  // namespace sqe
