#pragma once

namespace mpgreedy {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace mpgreedy
