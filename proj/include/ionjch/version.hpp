#pragma once

namespace ionjch {
inline constexpr const char* kVersion = "0.1.0";
}
