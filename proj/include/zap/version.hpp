#pragma once

namespace zap {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace zap
