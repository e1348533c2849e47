#pragma once

namespace nlkm {

inline constexpr const char* kToolName = "nlkm";
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace nlkm
