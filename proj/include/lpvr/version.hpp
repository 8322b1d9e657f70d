#pragma once

namespace lpvr {

inline constexpr const char* kVersion = "0.1.0";

} // namespace lpvr
