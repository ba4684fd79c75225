#include "pathkernel/parallel.hpp"

#include <cstdlib>
#include <string>

namespace pathkernel {

unsigned resolve_workers(unsigned requested) {
  if (const char* env = std::getenv("PATHKERNEL_WORKERS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
      // ignore malformed overrides
    }
  }
  return std::max(1u, requested);
}

}  // namespace pathkernel
