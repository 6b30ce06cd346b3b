#pragma once

namespace bia {

inline constexpr const char* kToolName = "biakit";
inline constexpr const char* kToolVersion = "1.0.0";

}  // namespace bia
