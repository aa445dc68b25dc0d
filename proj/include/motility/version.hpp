#pragma once

namespace motility {
inline constexpr const char* kVersion = "0.1.0";
}
