#include "phtk/parallel.hpp"

#include <cstdlib>
#include <string>

namespace phtk {

int thread_cap() {
  if (const char* env = std::getenv("PHTK_THREADS")) {
    try {
      const int v = std::stoi(env);
      if (v > 0) return v;
    } catch (...) {
      // unparsable value: fall through to the default
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace phtk
