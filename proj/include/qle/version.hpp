#pragma once

namespace qle {
inline constexpr const char* kVersion = "0.1.0";
}
