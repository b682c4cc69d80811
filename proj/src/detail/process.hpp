#pragma once

#include <chrono>
#include <string>
#include <vector>

namespace cta::detail {

struct ProcessOutcome {
  int exit_code = -1;  // -1 when killed by a signal
  bool timed_out = false;
  std::string output;  // stdout and stderr, interleaved as written
};

// Runs argv[0] (PATH lookup) in its own process group with stdin on
// /dev/null. On timeout the whole group is killed.
ProcessOutcome run_process(const std::vector<std::string>& argv, std::chrono::milliseconds timeout);

}  // namespace cta::detail
