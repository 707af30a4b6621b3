#pragma once

#include <optional>
#include <string>

namespace mdisc {

/// Number of OpenMP workers used by the parallel kernels. Resolution order:
/// an explicit set_workers() call, then the MDISC_WORKERS environment
/// variable, then the OpenMP default.
int worker_count();
void set_workers(std::optional<int> workers);

/// Parses a worker count (positive integer); throws ValidationError.
int parse_workers(const std::string& text);

}  // namespace mdisc
