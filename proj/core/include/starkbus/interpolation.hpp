#pragma once

#include <vector>

namespace starkbus {

/// Shape-preserving piecewise cubic Hermite interpolant (Fritsch-Carlson
/// slopes). Monotone data give a monotone interpolant. Evaluation outside
/// [front, back] of the abscissae throws InvalidArgument.
class MonotoneCubic {
public:
  MonotoneCubic() = default;
  MonotoneCubic(std::vector<double> x, std::vector<double> y);

  double operator()(double x) const;
  double lower() const { return x_.front(); }
  double upper() const { return x_.back(); }
  std::size_t size() const { return x_.size(); }

private:
  std::vector<double> x_;
  std::vector<double> y_;
  std::vector<double> slope_;
};

} // namespace starkbus
