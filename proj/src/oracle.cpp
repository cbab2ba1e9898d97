#include "pimi/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "pimi/batch.hpp"
#include "pimi/kernels.hpp"
#include "pimi/rng.hpp"

namespace pimi {

std::string_view to_string(OracleMethod method) {
  switch (method) {
    case OracleMethod::Exhaustive: return "exhaustive";
    case OracleMethod::SimAnneal: return "sa";
    case OracleMethod::LocalSearch: return "bls";
  }
  return "exhaustive";
}

OracleMethod parse_oracle_method(std::string_view name) {
  for (auto m : {OracleMethod::Exhaustive, OracleMethod::SimAnneal, OracleMethod::LocalSearch}) {
    if (to_string(m) == name) return m;
  }
  throw_invalid("unknown oracle method '" + std::string(name) + "'");
}

std::string OracleEffort::describe() const {
  std::string out = "restarts=" + std::to_string(restarts) + " per_restart=" +
                    std::to_string(per_restart);
  if (stages > 0) out += " stages=" + std::to_string(stages);
  return out;
}

OracleResult exhaustive(const IsingInstance& inst) {
  const std::size_t n = inst.size();
  if (n > kExhaustiveMaxSpins) {
    throw_invalid("exhaustive oracle supports N <= 24 (got " + std::to_string(n) +
                  "); use the sa or bls oracle instead");
  }
  const auto h = inst.h();
  const bool symmetric = std::all_of(h.begin(), h.end(), [](double v) { return v == 0.0; });
  const auto best = kernels::exhaustive_min(inst.j_data(), h, n, symmetric);
  std::vector<double> s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = (best.state_bits >> i) & 1U ? -1.0 : 1.0;
  SpinState state(std::move(s));
  OracleResult r;
  // Report the energy recomputed from scratch, not the incremental sum.
  r.best_energy = energy(inst, state);
  r.best_state = std::move(state);
  r.method = OracleMethod::Exhaustive;
  r.effort = {1, std::size_t{1} << (symmetric ? n - 1 : n), 0};
  return r;
}

std::size_t default_flips_per_temperature(std::size_t n) {
  if (n < 70) return 10 * n;
  if (n <= 100) return 10'000;
  if (n <= 150) return 20'000;
  return 50'000;
}

std::size_t sa_stage_count(double t_init, double t_final, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0) || !(t_init > 0.0) || !(t_final > 0.0)) {
    throw_invalid("annealing needs 0 < alpha < 1 and positive temperatures");
  }
  std::size_t stages = 0;
  for (double t = t_init; t >= t_final; t *= alpha) ++stages;
  return stages;
}

namespace {

struct Walk {
  SpinState s;
  std::vector<double> field;  // raw J s + h
  double e = 0.0;

  Walk(const IsingInstance& inst, SpinState start) : s(std::move(start)) {
    field = local_fields(inst, s);
    e = energy(inst, s);
  }

  double delta(std::size_t k) const { return 2.0 * s[k] * field[k]; }

  void flip(const IsingInstance& inst, std::size_t k) {
    e += delta(k);
    const double change = -2.0 * s[k];
    s.flip(k);
    const auto col = inst.j_row(k);  // symmetric: column k == row k
    for (std::size_t i = 0; i < field.size(); ++i) field[i] += col[i] * change;
  }
};

OracleResult reduce_best(std::vector<OracleResult>& runs) {
  std::size_t best = 0;
  for (std::size_t r = 1; r < runs.size(); ++r) {
    if (runs[r].best_energy < runs[best].best_energy) best = r;
  }
  return std::move(runs[best]);
}

}  // namespace

OracleResult sim_anneal_oracle(const IsingInstance& inst, const SimAnnealOptions& options) {
  if (options.restarts < 1) throw_invalid("simulated annealing needs at least one restart");
  const std::size_t n = inst.size();
  const std::size_t flips =
      options.flips_per_temp > 0 ? options.flips_per_temp : default_flips_per_temperature(n);
  const std::size_t stages = sa_stage_count(options.t_init, options.t_final, options.alpha);

  std::vector<OracleResult> runs(options.restarts);
  run_indexed(options.restarts, options.workers, [&](std::size_t r) {
    const std::uint64_t seed = derive_seed(stream_seed(options.seed, Stream::Oracle), r);
    CounterRng rng(seed);
    Walk w(inst, SpinState::random(n, derive_seed(seed, 0xA11CEULL)));
    double best_e = w.e;
    SpinState best_s = w.s;
    double temp = options.t_init;
    for (std::size_t stage = 0; stage < stages; ++stage, temp *= options.alpha) {
      for (std::size_t f = 0; f < flips; ++f) {
        const auto k = static_cast<std::size_t>(rng.below(n));
        const double d = w.delta(k);
        const double u = rng.uniform01();
        if (d <= 0.0 || u < std::exp(-d / temp)) {
          w.flip(inst, k);
          if (w.e < best_e) {
            best_e = w.e;
            best_s = w.s;
          }
        }
      }
    }
    runs[r].best_energy = energy(inst, best_s);
    runs[r].best_state = std::move(best_s);
  });
  OracleResult out = reduce_best(runs);
  out.method = OracleMethod::SimAnneal;
  out.effort = {options.restarts, flips, stages};
  return out;
}

OracleResult local_search_oracle(const IsingInstance& inst, const LocalSearchOptions& options) {
  const std::size_t n = inst.size();
  const std::size_t restarts = options.restarts > 0 ? options.restarts : (n <= 150 ? 100 : 200);
  const std::size_t cycles = options.cycles > 0 ? options.cycles : (n <= 150 ? 500 : 1000);
  const std::size_t max_kick = std::max<std::size_t>(2, n / 10);

  std::vector<OracleResult> runs(restarts);
  run_indexed(restarts, options.workers, [&](std::size_t r) {
    const std::uint64_t seed = derive_seed(stream_seed(options.seed, Stream::Oracle), 0xB15ULL, r);
    CounterRng rng(seed);
    Walk w(inst, SpinState::random(n, derive_seed(seed, 0xA11CEULL)));
    double best_e = std::numeric_limits<double>::infinity();
    SpinState best_s = w.s;
    std::size_t stale = 0;
    std::vector<std::size_t> order(n);

    for (std::size_t c = 0; c < cycles; ++c) {
      // Best-improvement descent.
      for (;;) {
        std::size_t arg = 0;
        double best_d = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double d = w.delta(k);
          if (d < best_d) {
            best_d = d;
            arg = k;
          }
        }
        if (best_d >= 0.0) break;
        w.flip(inst, arg);
      }
      if (w.e < best_e) {
        best_e = w.e;
        best_s = w.s;
        stale = 0;
      } else if (++stale >= n) {
        w = Walk(inst, best_s);
        stale = 0;
      }
      // Breakout kick: flip a random subset of distinct spins.
      const std::size_t kick =
          std::min(n, 2 + static_cast<std::size_t>(rng.below(max_kick - 1)));
      std::iota(order.begin(), order.end(), std::size_t{0});
      for (std::size_t k = 0; k < kick; ++k) {
        const auto pick = k + static_cast<std::size_t>(rng.below(n - k));
        std::swap(order[k], order[pick]);
        w.flip(inst, order[k]);
      }
    }
    runs[r].best_energy = energy(inst, best_s);
    runs[r].best_state = std::move(best_s);
  });
  OracleResult out = reduce_best(runs);
  out.method = OracleMethod::LocalSearch;
  out.effort = {restarts, cycles, 0};
  return out;
}

}  // namespace pimi
