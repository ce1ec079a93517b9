#include "starkbus/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "starkbus/errors.hpp"

namespace starkbus {

OptimizeResult nelder_mead(const Objective &f, std::vector<double> x0, const NelderMeadOptions &options) {
  const std::size_t n = x0.size();
  if (n == 0) throw InvalidArgument("nothing to optimise");
  if (options.initial_step.size() != n) throw InvalidArgument("initial_step must match the dimension");
  const bool boxed = !options.lower.empty() || !options.upper.empty();
  if (boxed && (options.lower.size() != n || options.upper.size() != n))
    throw InvalidArgument("bounds must match the dimension");

  auto clamp = [&](std::vector<double> &x) {
    if (!boxed) return;
    for (std::size_t i = 0; i < n; ++i) x[i] = std::clamp(x[i], options.lower[i], options.upper[i]);
  };
  OptimizeResult result;
  auto eval = [&](std::vector<double> &x) {
    clamp(x);
    ++result.evaluations;
    const double v = f(x);
    return std::isnan(v) ? INFINITY : v;
  };

  std::vector<std::vector<double>> pts(n + 1, x0);
  for (std::size_t i = 0; i < n; ++i) {
    pts[i + 1][i] += options.initial_step[i];
    if (boxed && pts[i + 1][i] > options.upper[i]) pts[i + 1][i] = x0[i] - options.initial_step[i];
  }
  std::vector<double> vals(n + 1);
  for (std::size_t i = 0; i <= n; ++i) vals[i] = eval(pts[i]);

  std::vector<std::size_t> order(n + 1);
  while (true) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
    const std::size_t best = order.front(), worst = order.back(), second = order[n - 1];

    double spread = vals[worst] - vals[best];
    double extent = 0.0;
    for (std::size_t i = 0; i <= n; ++i)
      for (std::size_t k = 0; k < n; ++k) extent = std::max(extent, std::abs(pts[i][k] - pts[best][k]));
    if (spread <= options.f_tolerance && extent <= options.x_tolerance) {
      result.converged = true;
      break;
    }
    if (result.evaluations >= options.max_evaluations) break;

    std::vector<double> centroid(n, 0.0);
    for (std::size_t i = 0; i <= n; ++i)
      if (i != worst)
        for (std::size_t k = 0; k < n; ++k) centroid[k] += pts[i][k] / static_cast<double>(n);
    auto along = [&](double c) {
      std::vector<double> x(n);
      for (std::size_t k = 0; k < n; ++k) x[k] = centroid[k] + c * (pts[worst][k] - centroid[k]);
      return x;
    };

    std::vector<double> xr = along(-1.0);
    const double fr = eval(xr);
    if (fr < vals[best]) {
      std::vector<double> xe = along(-2.0);
      const double fe = eval(xe);
      if (fe < fr) {
        pts[worst] = xe;
        vals[worst] = fe;
      } else {
        pts[worst] = xr;
        vals[worst] = fr;
      }
      continue;
    }
    if (fr < vals[second]) {
      pts[worst] = xr;
      vals[worst] = fr;
      continue;
    }
    const bool outside = fr < vals[worst];
    std::vector<double> xc = along(outside ? -0.5 : 0.5);
    const double fc = eval(xc);
    if (fc < (outside ? fr : vals[worst])) {
      pts[worst] = xc;
      vals[worst] = fc;
      continue;
    }
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == best) continue;
      for (std::size_t k = 0; k < n; ++k) pts[i][k] = pts[best][k] + 0.5 * (pts[i][k] - pts[best][k]);
      vals[i] = eval(pts[i]);
    }
  }
  const auto it = std::min_element(vals.begin(), vals.end());
  result.x = pts[static_cast<std::size_t>(it - vals.begin())];
  result.value = *it;
  return result;
}

} // namespace starkbus
