#pragma once

namespace sbm {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace sbm
