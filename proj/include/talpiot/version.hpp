#pragma once

namespace talpiot {

inline constexpr const char* kToolName = "talpiot";
inline constexpr const char* kVersion = "0.1.0";

}  // namespace talpiot
