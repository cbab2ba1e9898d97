#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "pimi/core.hpp"
#include "pimi/rng.hpp"
#include "pimi/schedule.hpp"

namespace testing {

// Triangle Max-Cut, J = -A, h = 0, no normalization.
inline pimi::IsingInstance k3() {
  auto inst = pimi::IsingInstance::zeros(3, "k3");
  inst.set_coupling(0, 1, -1.0);
  inst.set_coupling(0, 2, -1.0);
  inst.set_coupling(1, 2, -1.0);
  return inst;
}

inline pimi::IsingInstance pair(double j12) {
  auto inst = pimi::IsingInstance::zeros(2, "pair");
  inst.set_coupling(0, 1, j12);
  return inst;
}

// Dense random instance with Gaussian couplings and biases.
inline pimi::IsingInstance random_instance(std::size_t n, std::uint64_t seed, bool bias = true) {
  pimi::CounterRng rng(seed);
  auto inst = pimi::IsingInstance::zeros(n, "rand");
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = i + 1; k < n; ++k) inst.set_coupling(i, k, rng.normal());
    if (bias) inst.set_bias(i, rng.normal());
  }
  return inst;
}

inline pimi::Schedule constant_schedule(double beta, double eta, double xi, std::size_t t) {
  pimi::ScheduleParams p;
  p.beta_table.assign(t, beta);
  p.eta_table.assign(t, eta);
  p.xi = xi;
  return pimi::make_schedule(pimi::ScheduleKind::Custom, p, t);
}

// Fresh scratch directory under the build tree.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::current_path() / "test_scratch" / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline double rel_diff(double a, double b) {
  const double scale = std::max({std::abs(a), std::abs(b), 1.0});
  return std::abs(a - b) / scale;
}

}  // namespace testing
