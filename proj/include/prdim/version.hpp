#pragma once

namespace prdim {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace prdim
