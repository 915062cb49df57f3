#pragma once

namespace qhhg {

inline constexpr const char* version = "0.1.0";

}  // namespace qhhg
