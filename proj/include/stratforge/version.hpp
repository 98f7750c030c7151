#pragma once

namespace stratforge {

inline constexpr const char* kVersion = "0.1.0";

} // namespace stratforge
