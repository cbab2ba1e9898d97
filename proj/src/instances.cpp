#include "pimi/instances.hpp"

#include <cmath>

#include "pimi/rng.hpp"

namespace pimi {

std::string_view to_string(InstanceFamily family) {
  return family == InstanceFamily::MaxCutER ? "maxcut" : "sk1";
}

InstanceFamily parse_instance_family(std::string_view name) {
  if (name == "maxcut") return InstanceFamily::MaxCutER;
  if (name == "sk1") return InstanceFamily::SkOne;
  throw_invalid("unknown instance family '" + std::string(name) + "'");
}

MaxCutInstance gen_maxcut(const GeneratorSpec& spec) {
  if (spec.family != InstanceFamily::MaxCutER) throw_invalid("gen_maxcut needs a maxcut spec");
  if (spec.n < 2) throw_invalid("Max-Cut instances need n >= 2");
  // p = 1 is accepted for the complete-graph limit.
  if (!(spec.edge_prob > 0.0 && spec.edge_prob <= 1.0)) {
    throw_invalid("edge probability must lie in (0, 1]");
  }
  const std::size_t n = spec.n;
  CounterRng rng(stream_seed(spec.seed, Stream::Generator));
  IsingInstance inst = IsingInstance::zeros(n);
  long long edges = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = i + 1; k < n; ++k) {
      if (rng.bernoulli(spec.edge_prob)) {
        inst.set_coupling(i, k, -1.0);
        ++edges;
      }
    }
  }
  inst.set_coupling_scale(2.0 / std::sqrt(static_cast<double>(n)));
  inst.set_label("maxcut n=" + std::to_string(n) + " p=" + std::to_string(spec.edge_prob) +
                 " seed=" + std::to_string(spec.seed));
  return {std::move(inst), edges};
}

IsingInstance gen_sk1(const GeneratorSpec& spec) {
  if (spec.family != InstanceFamily::SkOne) throw_invalid("gen_sk1 needs an sk1 spec");
  if (spec.n < 2) throw_invalid("SK-1 instances need n >= 2");
  const std::size_t n = spec.n;
  CounterRng rng(stream_seed(spec.seed, Stream::Generator));
  IsingInstance inst = IsingInstance::zeros(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = i + 1; k < n; ++k) {
      inst.set_coupling(i, k, (rng.next_u64() >> 63) ? 1.0 : -1.0);
    }
  }
  inst.set_coupling_scale(1.0 / std::sqrt(static_cast<double>(n)));
  inst.set_label("sk1 n=" + std::to_string(n) + " seed=" + std::to_string(spec.seed));
  return inst;
}

std::string instance_filename(InstanceFamily family, std::size_t n, std::size_t index) {
  return std::string(to_string(family)) + "_n" + std::to_string(n) + "_i" +
         std::to_string(index) + ".json";
}

std::uint64_t instance_seed(std::uint64_t base_seed, std::size_t n, std::size_t index) {
  return derive_seed(base_seed, n, index);
}

}  // namespace pimi
