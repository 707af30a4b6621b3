#include "mdisc/parallel.hpp"

#include "mdisc/errors.hpp"

#include <omp.h>

#include <cstdlib>
#include <stdexcept>

namespace mdisc {

namespace {
std::optional<int> g_override;
}

int parse_workers(const std::string& text) {
  std::size_t used = 0;
  int value = 0;
  try {
    value = std::stoi(text, &used);
  } catch (const std::exception&) {
    throw ValidationError("worker count '" + text + "' is not an integer");
  }
  if (used != text.size() || value < 1) throw ValidationError("worker count must be a positive integer, got '" + text + "'");
  return value;
}

int worker_count() {
  if (g_override) return *g_override;
  if (const char* env = std::getenv("MDISC_WORKERS"); env != nullptr && *env != '\0') return parse_workers(env);
  return omp_get_max_threads();
}

void set_workers(std::optional<int> workers) {
  if (workers && *workers < 1) throw ValidationError("worker count must be positive");
  g_override = workers;
}

}  // namespace mdisc
