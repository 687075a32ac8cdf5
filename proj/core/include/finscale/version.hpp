#pragma once

namespace finscale {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace finscale
