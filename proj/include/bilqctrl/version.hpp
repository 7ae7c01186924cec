#pragma once

namespace bilqctrl {

inline constexpr const char* kToolName = "bilqctrl";
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace bilqctrl
