#pragma once

// Data-parallel inner loops. Each OpenMP kernel has a serial twin in
// `pimi::kernels::reference`; tests hold the two to exact agreement and the
// benchmark target compares their throughput.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace pimi::kernels {

// Rows at or above this size use the OpenMP path in coupling_mvm.
inline constexpr std::size_t kParallelMvmThreshold = 128;

// out[i] = sum_j j[i*n + j] * s[j].
void coupling_mvm(std::span<const double> j, std::size_t n, std::span<const double> s,
                  std::span<double> out);

struct ExhaustiveMin {
  double energy = 0.0;
  std::uint64_t state_bits = 0;  // bit i set <=> s_i = -1
};

// Minimum of H over all states, enumerated in Gray-code order. When
// `fix_first` is set only states with s_0 = +1 are visited (valid when h = 0).
ExhaustiveMin exhaustive_min(std::span<const double> j, std::span<const double> h,
                             std::size_t n, bool fix_first);

namespace reference {

void coupling_mvm(std::span<const double> j, std::size_t n, std::span<const double> s,
                  std::span<double> out);

// Plain loop over every assignment, recomputing the energy from scratch.
ExhaustiveMin exhaustive_min(std::span<const double> j, std::span<const double> h,
                             std::size_t n, bool fix_first);

}  // namespace reference

}  // namespace pimi::kernels
