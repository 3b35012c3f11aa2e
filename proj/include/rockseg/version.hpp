#pragma once

namespace rockseg {

inline constexpr const char* kVersion = "0.1.0";

} // namespace rockseg
