#pragma once

namespace ccsb {
inline constexpr const char* kVersion = "0.1.0";
}
