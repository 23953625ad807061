#pragma once

namespace simplexnet {

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace simplexnet
