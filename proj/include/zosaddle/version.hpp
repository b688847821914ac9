#pragma once

namespace zosaddle {
inline constexpr const char* kVersion = "0.1.0";
}
