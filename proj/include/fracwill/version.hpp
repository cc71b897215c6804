#pragma once

namespace fracwill {
inline constexpr const char* kVersion = "0.1.0";
}
