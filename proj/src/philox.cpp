#include "prdim/philox.hpp"

#include <cmath>
#include <numbers>

namespace prdim {

double CounterRng::normal(std::uint64_t i0, std::uint64_t i1, std::uint64_t i2) const {
    const auto words = raw(i0, i1, i2);
    // u1 in (0, 1] so the log is finite; u2 in [0, 1)
    const double u1 = (static_cast<double>(words[0] >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = u64_to_unit(words[1]);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace prdim
