#pragma once

namespace aelts {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace aelts
