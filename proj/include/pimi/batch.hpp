#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "pimi/solvers.hpp"

namespace pimi {

// Runs task(k) for k in [0, count) on `workers` threads that pull indices from
// a shared atomic cursor. The first exception thrown by any task stops further
// dispatch and is rethrown to the caller once all workers have joined.
void run_indexed(std::size_t count, std::size_t workers,
                 const std::function<void(std::size_t)>& task);

// Worker count from PIMI_LAB_WORKERS, falling back to `fallback`.
std::size_t default_workers(std::size_t fallback = 1);

struct BatchConfig {
  SolverKind kind = SolverKind::Pimi;
  std::size_t n_trials = 1;
  std::uint64_t base_seed = 0;
  std::size_t workers = 1;
  TrialOptions options;
};

// result[instance][trial]; trial seeds derive from (base_seed, instance, trial)
// so the output is independent of the worker count. `schedules` holds one
// schedule per instance.
std::vector<std::vector<TrialRecord>> run_batch(const std::vector<IsingInstance>& instances,
                                                const std::vector<Schedule>& schedules,
                                                const BatchConfig& config);

// Convenience overload sharing one schedule across all instances.
std::vector<std::vector<TrialRecord>> run_batch(const std::vector<IsingInstance>& instances,
                                                const Schedule& schedule,
                                                const BatchConfig& config);

}  // namespace pimi
