#pragma once

namespace dimpol {

inline constexpr const char* kToolName = "dimpol";
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace dimpol
