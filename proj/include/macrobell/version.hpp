#pragma once

namespace macrobell {

inline constexpr const char* kVersion = "0.1.0";

}
