#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "pimi/core.hpp"
#include "pimi/quantize.hpp"
#include "pimi/schedule.hpp"

namespace pimi {

enum class SolverKind { ConvSequential, ConvParallel, Pimi };

std::string_view to_string(SolverKind kind);  // "conv-seq" | "conv-par" | "pimi"
SolverKind parse_solver_kind(std::string_view name);

enum class NoiseDistribution { UniformPm1, StdNormal };

// Seeded, counter-addressed noise. Sample k of a stream is a pure function of
// (seed, k); the pregenerated mode replays a fixed table the way the FPGA
// kernels replay preloaded noise.
class NoiseSource {
 public:
  NoiseSource(std::uint64_t seed, NoiseDistribution dist);
  NoiseSource(std::uint64_t seed, NoiseDistribution dist, std::size_t table_length);

  // Uniform(-1,1) for conventional PIM, N(0,1) for PIMI.
  static NoiseSource for_solver(SolverKind kind, std::uint64_t seed);

  double sample(std::uint64_t counter) const noexcept;

  std::uint64_t seed() const noexcept { return seed_; }
  NoiseDistribution distribution() const noexcept { return dist_; }
  bool pregenerated() const noexcept { return table_ != nullptr; }
  std::size_t table_length() const noexcept { return table_ ? table_->size() : 0; }

 private:
  double draw(std::uint64_t counter) const noexcept;

  std::uint64_t seed_;
  NoiseDistribution dist_;
  std::shared_ptr<const std::vector<double>> table_;
};

// Arithmetic mode of the update datapath. Without a format everything runs in
// double precision with the exact tanh.
struct Precision {
  std::optional<FixedPointFormat> format;
  int tanh_levels = 4;

  static Precision full() { return {}; }
  static Precision fixed(FixedPointFormat fmt, int tanh_levels = 4) {
    return {fmt, tanh_levels};
  }
  bool quantized() const noexcept { return format.has_value(); }
};

// sign(0) = +1 throughout.
inline double spin_sign(double x) noexcept { return x < 0.0 ? -1.0 : 1.0; }

// Single update step t. Conventional sequential updates spin t mod N from the
// live state; the parallel rules read only the pre-step state.
SpinState step_conv_sequential(const IsingInstance& inst, const SpinState& s, std::size_t t,
                               const Schedule& sched, const NoiseSource& noise,
                               const Precision& precision = Precision::full());
SpinState step_conv_parallel(const IsingInstance& inst, const SpinState& s, std::size_t t,
                             const Schedule& sched, const NoiseSource& noise,
                             const Precision& precision = Precision::full());
SpinState step_pimi(const IsingInstance& inst, const SpinState& s, std::size_t t,
                    const Schedule& sched, const NoiseSource& noise,
                    const Precision& precision = Precision::full());

struct TrialOptions {
  bool record_energy = false;
  bool record_states = false;
  Precision precision;
};

// Runs sched.t_steps() update steps from `init`.
TrialRecord run_trial(const IsingInstance& inst, SolverKind kind, const Schedule& sched,
                      const SpinState& init, const NoiseSource& noise,
                      const TrialOptions& options = {});

// Per-trial seed and the derived initial state / noise used by the batch runner.
std::uint64_t trial_seed(std::uint64_t base_seed, std::size_t instance_index,
                         std::size_t trial_index);
SpinState trial_initial_state(std::size_t n, std::uint64_t trial_seed);
NoiseSource trial_noise(SolverKind kind, std::uint64_t trial_seed);

}  // namespace pimi
