#pragma once

namespace quditrep {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace quditrep
