#pragma once

namespace abq {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace abq
