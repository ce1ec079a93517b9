#include "starkbus/noise.hpp"

#include "starkbus/errors.hpp"

namespace starkbus {

namespace {

void check(const NoiseSpectrum::Component &c) {
  if (const auto *l = std::get_if<LorentzianTLS>(&c)) {
    if (l->peak < 0.0) throw InvalidArgument("Lorentzian peak must be non-negative");
    if (l->half_width.rad_per_ns() <= 0.0) throw InvalidArgument("Lorentzian width must be positive");
  } else if (std::get<WhiteFloor>(c).level < 0.0) {
    throw InvalidArgument("white noise level must be non-negative");
  }
}

struct Evaluate {
  double w;
  double operator()(const LorentzianTLS &l) const {
    const double g = l.half_width.rad_per_ns();
    const double x = w - l.center.rad_per_ns();
    return l.peak * g * g / (x * x + g * g);
  }
  double operator()(const WhiteFloor &f) const { return f.level; }
};

} // namespace

NoiseSpectrum::NoiseSpectrum(std::initializer_list<Component> components)
    : NoiseSpectrum(std::vector<Component>(components)) {}

NoiseSpectrum::NoiseSpectrum(std::vector<Component> components) : components_(std::move(components)) {
  for (const auto &c : components_) check(c);
}

double NoiseSpectrum::operator()(Frequency w) const {
  if (w.rad_per_ns() < 0.0) return 0.0;
  double s = 0.0;
  for (const auto &c : components_) s += std::visit(Evaluate{w.rad_per_ns()}, c);
  return s;
}

} // namespace starkbus
