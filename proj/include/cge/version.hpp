#pragma once

namespace cge {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kToolName = "cge";

} // namespace cge
