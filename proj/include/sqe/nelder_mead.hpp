#pragma once

#include <functional>
#include <vector>

namespace sqe {

struct SimplexOptions {
  int max_iterations = 2000;
  /// Stop when the spread of simplex values drops below this.
  double value_tolerance = 1e-10;
  double initial_step = 0.5;
  double reflect = 1.0;
  double expand = 2.0;
  double contract = 0.5;
  double shrink = 0.5;
};

struct SimplexResult {
  std::vector<double> x;
  double value = 0.0;
  long evaluations = 0;
  int iterations = 0;
  bool converged = false;
};

/// Derivative-free Nelder-Mead minimization. Deterministic for a given start.
SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                          std::vector<double> start, const SimplexOptions& options = {});

}  // namespace sqe
