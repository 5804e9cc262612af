#pragma once

namespace thermimic {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace thermimic
