#pragma once

#include <functional>
#include <vector>

namespace starkbus {

struct NelderMeadOptions {
  std::vector<double> initial_step; // per coordinate; required
  std::vector<double> lower;        // optional box, clamped on every trial point
  std::vector<double> upper;
  double f_tolerance = 1e-10;       // spread of simplex values
  double x_tolerance = 1e-8;        // simplex extent, per coordinate
  int max_evaluations = 2000;
};

struct OptimizeResult {
  std::vector<double> x;
  double value = 0.0;
  int evaluations = 0;
  bool converged = false;
};

using Objective = std::function<double(const std::vector<double> &)>;

/// Downhill simplex minimisation (reflection 1, expansion 2, contraction
/// 1/2, shrink 1/2). Deterministic for a deterministic objective.
OptimizeResult nelder_mead(const Objective &f, std::vector<double> x0, const NelderMeadOptions &options);

} // namespace starkbus
