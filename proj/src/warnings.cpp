#include "sbm/warnings.hpp"

#include <atomic>
#include <iostream>
#include <mutex>

namespace sbm {

namespace {
std::atomic<std::uint64_t> g_count{0};
std::mutex g_mutex;
}  // namespace

void warn(const std::string& message) {
  const auto count = g_count.fetch_add(1, std::memory_order_relaxed) + 1;
  // keep long runs readable: after the first few, only print occasionally
  if (count > 20 && count % 1000 != 0) return;
  std::lock_guard<std::mutex> lock(g_mutex);
  std::cerr << "[sbm warning] " << message << " (#" << count << ")\n";
}

std::uint64_t warning_count() { return g_count.load(std::memory_order_relaxed); }

}  // namespace sbm
