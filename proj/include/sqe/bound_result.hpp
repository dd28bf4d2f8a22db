#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace sqe {

/// A named capacity bound in bits per channel use, with the inputs and
/// optimizer history that produced it.
struct BoundResult {
  std::string name;
  double value = 0.0;
  std::map<std::string, double> params;
  /// Optimizer minimizer (phases, or empty when not applicable).
  std::vector<double> argmin;
  /// Running best value after each optimizer stage.
  std::vector<double> trace;
  long evaluations = 0;
  bool budget_exhausted = false;
  std::string caveat;

  friend bool operator==(const BoundResult&, const BoundResult&) = default;
};

void to_json(nlohmann::json& j, const BoundResult& r);
void from_json(const nlohmann::json& j, BoundResult& r);

}  // namespace sqe
