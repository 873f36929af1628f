#pragma once

namespace cascade {

inline constexpr const char* version = "0.1.0";

}  // namespace cascade
