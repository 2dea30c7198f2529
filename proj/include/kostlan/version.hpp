#pragma once

namespace kostlan {

inline constexpr const char* version = "0.1.0";

}  // namespace kostlan
