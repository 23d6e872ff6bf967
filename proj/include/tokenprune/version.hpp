#pragma once

namespace tokenprune {

inline constexpr const char* kToolName = "tokenprune";
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace tokenprune
