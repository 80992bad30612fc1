#pragma once

#include <cstdint>
#include <string>

namespace sbm {

// Non-fatal numerical conditions (degenerate truncation mass, zero-variance
// chains, ...) are reported here rather than thrown. Tests inspect the
// counter to assert that a warning path was taken.
void warn(const std::string& message);
std::uint64_t warning_count();

}  // namespace sbm
