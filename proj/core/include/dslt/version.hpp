#pragma once

namespace dslt {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace dslt
