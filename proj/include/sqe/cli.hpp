#pragma once

// Command-line front end. Kept as a library so the commands can be driven
// in-process by tests.

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "sqe/qcore.hpp"

namespace sqe::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitIoError = 3;

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SweepSpec {
  std::string parameter;
  double start = 0.0;
  double stop = 1.0;
  int points = 101;
};

/// 12 significant digits, '.' separator, "inf" for the unbounded sentinel.
std::string format_number(double v);

/// Channel description: {"in_dim", "out_dim", "kraus": [matrix...]} where each
/// matrix is a list of rows of [re, im] pairs, or a flat row-major list of pairs.
FiniteChannel parse_channel_json(const nlohmann::json& j);
/// Throws IoError when unreadable and ValidationError when malformed.
FiniteChannel load_channel_file(const std::string& path);
nlohmann::json channel_to_json(const FiniteChannel& channel);

/// Default sweep for the named figure: dephasing, depolarizing, pure-loss.
SweepSpec default_sweep(const std::string& figure);
std::vector<double> sweep_points(const SweepSpec& spec);
/// CSV with header "param,upper_bound,lower_bound", one row per sweep point.
std::string figure_csv(const std::string& figure, const SweepSpec& spec);

/// Full command dispatch; returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sqe::cli
