#pragma once

namespace kcbs {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kToolName = "kcbs";

}  // namespace kcbs
