#include "pimi/kernels.hpp"

#include <bit>
#include <limits>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pimi::kernels {

void coupling_mvm(std::span<const double> j, std::size_t n, std::span<const double> s,
                  std::span<double> out) {
  const double* jp = j.data();
  const double* sp = s.data();
  double* op = out.data();
  const auto rows = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static) if (n >= kParallelMvmThreshold)
  for (std::ptrdiff_t i = 0; i < rows; ++i) {
    const double* row = jp + i * rows;
    double acc = 0.0;
    for (std::ptrdiff_t k = 0; k < rows; ++k) acc += row[k] * sp[k];
    op[i] = acc;
  }
}

namespace {

// Energy of the state encoded by `bits` (bit i set <=> s_i = -1).
double energy_of_bits(std::span<const double> j, std::span<const double> h, std::size_t n,
                      std::uint64_t bits) {
  double e = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double si = (bits >> i) & 1U ? -1.0 : 1.0;
    for (std::size_t k = i + 1; k < n; ++k) {
      const double sk = (bits >> k) & 1U ? -1.0 : 1.0;
      e -= j[i * n + k] * si * sk;
    }
    e -= h[i] * si;
  }
  return e;
}

void check_exhaustive_size(std::size_t n) {
  if (n == 0 || n > 40) throw std::invalid_argument("exhaustive enumeration supports 1..40 spins");
}

}  // namespace

ExhaustiveMin exhaustive_min(std::span<const double> j, std::span<const double> h,
                             std::size_t n, bool fix_first) {
  check_exhaustive_size(n);
  // Free spins are [first, n). The free range is split into 2^chunk_bits
  // blocks by fixing the top free spins; each block walks the remaining low
  // spins in Gray-code order with O(N) incremental energy updates.
  const std::size_t first = fix_first ? 1 : 0;
  const std::size_t free_spins = n - first;
  const std::size_t chunk_bits = free_spins > 6 ? 6 : free_spins;
  const std::size_t inner_bits = free_spins - chunk_bits;
  const std::int64_t blocks = std::int64_t{1} << chunk_bits;

  ExhaustiveMin best{std::numeric_limits<double>::infinity(), 0};

#pragma omp parallel
  {
    ExhaustiveMin local{std::numeric_limits<double>::infinity(), 0};
    std::vector<double> s(n);
    std::vector<double> field(n);
#pragma omp for schedule(dynamic)
    for (std::int64_t block = 0; block < blocks; ++block) {
      std::uint64_t bits = static_cast<std::uint64_t>(block) << (first + inner_bits);
      for (std::size_t i = 0; i < n; ++i) s[i] = (bits >> i) & 1U ? -1.0 : 1.0;
      for (std::size_t i = 0; i < n; ++i) {
        double acc = h[i];
        for (std::size_t k = 0; k < n; ++k) acc += j[i * n + k] * s[k];
        field[i] = acc;
      }
      double e = energy_of_bits(j, h, n, bits);
      if (e < local.energy || (e == local.energy && bits < local.state_bits)) {
        local = {e, bits};
      }
      const std::uint64_t steps = std::uint64_t{1} << inner_bits;
      for (std::uint64_t g = 1; g < steps; ++g) {
        const std::size_t k = first + static_cast<std::size_t>(std::countr_zero(g));
        // Flipping spin k changes the energy by 2 s_k I_k.
        e += 2.0 * s[k] * field[k];
        const double delta = -2.0 * s[k];
        s[k] = -s[k];
        bits ^= std::uint64_t{1} << k;
        for (std::size_t i = 0; i < n; ++i) field[i] += j[i * n + k] * delta;
        if (e < local.energy || (e == local.energy && bits < local.state_bits)) {
          local = {e, bits};
        }
      }
    }
#pragma omp critical
    {
      if (local.energy < best.energy ||
          (local.energy == best.energy && local.state_bits < best.state_bits)) {
        best = local;
      }
    }
  }
  return best;
}

namespace reference {

void coupling_mvm(std::span<const double> j, std::size_t n, std::span<const double> s,
                  std::span<double> out) {
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) acc += j[i * n + k] * s[k];
    out[i] = acc;
  }
}

ExhaustiveMin exhaustive_min(std::span<const double> j, std::span<const double> h,
                             std::size_t n, bool fix_first) {
  check_exhaustive_size(n);
  ExhaustiveMin best{std::numeric_limits<double>::infinity(), 0};
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t bits = 0; bits < total; ++bits) {
    if (fix_first && (bits & 1U)) continue;
    const double e = energy_of_bits(j, h, n, bits);
    if (e < best.energy) best = {e, bits};
  }
  return best;
}

}  // namespace reference

}  // namespace pimi::kernels
