#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include "pimi/core.hpp"

namespace pimi {

enum class OracleMethod { Exhaustive, SimAnneal, LocalSearch };

std::string_view to_string(OracleMethod method);  // "exhaustive" | "sa" | "bls"
OracleMethod parse_oracle_method(std::string_view name);

struct OracleEffort {
  std::size_t restarts = 0;
  std::size_t per_restart = 0;  // states, flips per temperature, or cycles
  std::size_t stages = 0;       // SA temperature stages; 0 otherwise

  std::string describe() const;
};

struct OracleResult {
  double best_energy = 0.0;
  SpinState best_state;
  OracleMethod method = OracleMethod::Exhaustive;
  OracleEffort effort;
};

inline constexpr std::size_t kExhaustiveMaxSpins = 24;

// Certified minimum by enumeration (s_0 fixed to +1 when h = 0). N <= 24.
OracleResult exhaustive(const IsingInstance& inst);

struct SimAnnealOptions {
  std::size_t restarts = 10;
  std::size_t flips_per_temp = 0;  // 0 selects the size-dependent default ladder
  double t_init = 5.0;
  double t_final = 0.01;
  double alpha = 0.995;
  std::uint64_t seed = 0;
  std::size_t workers = 1;
};

// 10N flips per temperature below N = 70, then 10k / 20k / 50k.
std::size_t default_flips_per_temperature(std::size_t n);

// Number of geometric temperature stages with T >= t_final.
std::size_t sa_stage_count(double t_init, double t_final, double alpha);

// Metropolis single-flip annealing on raw J; best over all restarts.
OracleResult sim_anneal_oracle(const IsingInstance& inst, const SimAnnealOptions& options = {});

struct LocalSearchOptions {
  std::size_t restarts = 0;  // 0 selects the default for N
  std::size_t cycles = 0;    // 0 selects the default for N
  std::uint64_t seed = 0;
  std::size_t workers = 1;
};

// Breakout-style local search. One cycle is a best-improvement descent to a
// local minimum followed by a random kick of 2..max(2, N/10) spins; after N
// cycles without a new best the walk returns to the best state found.
OracleResult local_search_oracle(const IsingInstance& inst,
                                 const LocalSearchOptions& options = {});

}  // namespace pimi
