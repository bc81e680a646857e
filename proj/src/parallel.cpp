#include "modkit/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace modkit {

namespace {

unsigned initial_threads() {
  if (const char* env = std::getenv("MODKIT_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
      // Fall through to the hardware default on junk input.
    }
  }
  return std::max(1U, std::thread::hardware_concurrency());
}

std::atomic<unsigned>& threads() {
  static std::atomic<unsigned> value{initial_threads()};
  return value;
}

}  // namespace

unsigned thread_count() { return threads().load(); }

void set_thread_count(unsigned n) { threads().store(n == 0 ? initial_threads() : n); }

}  // namespace modkit
