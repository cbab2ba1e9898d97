#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include "pimi/core.hpp"

namespace pimi {

enum class InstanceFamily { MaxCutER, SkOne };

std::string_view to_string(InstanceFamily family);  // "maxcut" | "sk1"
InstanceFamily parse_instance_family(std::string_view name);

struct GeneratorSpec {
  InstanceFamily family = InstanceFamily::MaxCutER;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  double edge_prob = 0.5;  // Max-Cut only
};

struct MaxCutInstance {
  IsingInstance ising;
  long long edge_count = 0;
};

// Erdos-Renyi graph, J = -A, h = 0, coupling scale 2/sqrt(N). Upper-triangle
// pairs are sampled in row-major order from the seeded stream.
MaxCutInstance gen_maxcut(const GeneratorSpec& spec);

// Fully connected +/-1 couplings, h = 0, coupling scale 1/sqrt(N).
IsingInstance gen_sk1(const GeneratorSpec& spec);

// "<family>_n<N>_i<k>.json"
std::string instance_filename(InstanceFamily family, std::size_t n, std::size_t index);

// Seed of the k-th instance in a generated set.
std::uint64_t instance_seed(std::uint64_t base_seed, std::size_t n, std::size_t index);

}  // namespace pimi
