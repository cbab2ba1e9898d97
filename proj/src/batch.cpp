#include "pimi/batch.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

namespace pimi {

void run_indexed(std::size_t count, std::size_t workers,
                 const std::function<void(std::size_t)>& task) {
  if (workers < 1) throw_invalid("worker count must be at least 1");
  if (count == 0) return;

  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::mutex error_mutex;

  auto worker = [&] {
    while (!failed.load(std::memory_order_relaxed)) {
      const std::size_t k = next.fetch_add(1, std::memory_order_relaxed);
      if (k >= count) return;
      try {
        task(k);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        failed.store(true);
        return;
      }
    }
  };

  const std::size_t spawn = std::min(workers, count);
  if (spawn == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(spawn);
    for (std::size_t w = 0; w < spawn; ++w) pool.emplace_back(worker);
  }
  if (first_error) std::rethrow_exception(first_error);
}

std::size_t default_workers(std::size_t fallback) {
  if (const char* env = std::getenv("PIMI_LAB_WORKERS"); env != nullptr && *env != '\0') {
    try {
      const long v = std::stol(env);
      if (v >= 1) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
    }
    throw_invalid("PIMI_LAB_WORKERS must be a positive integer");
  }
  return fallback;
}

std::vector<std::vector<TrialRecord>> run_batch(const std::vector<IsingInstance>& instances,
                                                const std::vector<Schedule>& schedules,
                                                const BatchConfig& config) {
  if (config.workers < 1) throw_invalid("worker count must be at least 1");
  if (schedules.size() != instances.size()) {
    throw_invalid("run_batch needs one schedule per instance");
  }
  std::vector<std::vector<TrialRecord>> out(instances.size());
  for (auto& per_instance : out) per_instance.resize(config.n_trials);
  const std::size_t total = instances.size() * config.n_trials;
  if (total == 0) return out;

  run_indexed(total, config.workers, [&](std::size_t k) {
    const std::size_t inst_idx = k / config.n_trials;
    const std::size_t trial_idx = k % config.n_trials;
    const auto& inst = instances[inst_idx];
    const std::uint64_t seed = trial_seed(config.base_seed, inst_idx, trial_idx);
    TrialRecord rec = run_trial(inst, config.kind, schedules[inst_idx],
                                trial_initial_state(inst.size(), seed),
                                trial_noise(config.kind, seed), config.options);
    rec.seed = seed;
    out[inst_idx][trial_idx] = std::move(rec);
  });
  return out;
}

std::vector<std::vector<TrialRecord>> run_batch(const std::vector<IsingInstance>& instances,
                                                const Schedule& schedule,
                                                const BatchConfig& config) {
  return run_batch(instances, std::vector<Schedule>(instances.size(), schedule), config);
}

}  // namespace pimi
