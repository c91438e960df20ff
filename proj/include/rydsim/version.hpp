#pragma once

namespace rydsim {

inline constexpr const char* version = "0.1.0";

}  // namespace rydsim
