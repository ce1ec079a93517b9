#include "starkbus/units.hpp"

#include <cmath>

namespace starkbus {

Frequency abs(Frequency f) { return Frequency::angular(std::abs(f.rad_per_ns())); }

} // namespace starkbus
