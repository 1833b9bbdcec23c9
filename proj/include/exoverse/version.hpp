#pragma once

namespace exoverse {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace exoverse
