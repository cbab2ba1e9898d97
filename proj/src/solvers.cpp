#include "pimi/solvers.hpp"

#include <cmath>
#include <limits>

#include "pimi/kernels.hpp"
#include "pimi/rng.hpp"

namespace pimi {

std::string_view to_string(SolverKind kind) {
  switch (kind) {
    case SolverKind::ConvSequential: return "conv-seq";
    case SolverKind::ConvParallel: return "conv-par";
    case SolverKind::Pimi: return "pimi";
  }
  return "pimi";
}

SolverKind parse_solver_kind(std::string_view name) {
  for (auto k : {SolverKind::ConvSequential, SolverKind::ConvParallel, SolverKind::Pimi}) {
    if (to_string(k) == name) return k;
  }
  throw_invalid("unknown solver kind '" + std::string(name) + "'");
}

NoiseSource::NoiseSource(std::uint64_t seed, NoiseDistribution dist) : seed_(seed), dist_(dist) {}

NoiseSource::NoiseSource(std::uint64_t seed, NoiseDistribution dist, std::size_t table_length)
    : seed_(seed), dist_(dist) {
  if (table_length == 0) throw_invalid("pregenerated noise table must be non-empty");
  auto table = std::make_shared<std::vector<double>>(table_length);
  for (std::size_t k = 0; k < table_length; ++k) (*table)[k] = draw(k);
  table_ = std::move(table);
}

NoiseSource NoiseSource::for_solver(SolverKind kind, std::uint64_t seed) {
  return NoiseSource(seed, kind == SolverKind::Pimi ? NoiseDistribution::StdNormal
                                                    : NoiseDistribution::UniformPm1);
}

double NoiseSource::draw(std::uint64_t counter) const noexcept {
  return dist_ == NoiseDistribution::StdNormal ? normal_at(seed_, counter)
                                               : uniform_pm1_at(seed_, counter);
}

double NoiseSource::sample(std::uint64_t counter) const noexcept {
  if (table_) return (*table_)[counter % table_->size()];
  return draw(counter);
}

namespace {

double row_dot(std::span<const double> row, std::span<const double> s) noexcept {
  double acc = 0.0;
  for (std::size_t k = 0; k < row.size(); ++k) acc += row[k] * s[k];
  return acc;
}

// The update datapath shared by the step functions and run_trial.
//
// Full precision:  I = scale * (J s) + h, drive = tanh(beta I) + xi s + eta z.
// Quantized: each product J_ij s_j, the accumulated field, beta I, the LUT
// output, xi s, eta z and the final sum are passed through quantize(). The
// accumulation itself is wide (exact in double), as in the hardware adder trees.
class Datapath {
 public:
  Datapath(const IsingInstance& inst, const Precision& precision)
      : inst_(inst), n_(inst.size()), scale_(inst.coupling_scale()), precision_(precision) {
    if (precision_.quantized()) {
      const auto& fmt = *precision_.format;
      lut_.emplace(precision_.tanh_levels);
      // q(J s) = c + d s for s in {-1, +1}, with c = (q(J) + q(-J)) / 2 and
      // d = (q(J) - q(-J)) / 2, so the quantized accumulation is an exact MVM.
      product_slope_.resize(n_ * n_);
      product_offset_.assign(n_, 0.0);
      for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t k = 0; k < n_; ++k) {
          const double pos = quantize(inst.j(i, k), fmt);
          const double neg = quantize(-inst.j(i, k), fmt);
          product_slope_[i * n_ + k] = 0.5 * (pos - neg);
          product_offset_[i] += 0.5 * (pos + neg);
        }
      }
    }
  }

  bool quantized() const noexcept { return precision_.quantized(); }
  std::size_t size() const noexcept { return n_; }

  // Raw interaction sums J s (unscaled, full precision) for every spin.
  void raw_sums(const SpinState& s, std::vector<double>& out) const {
    out.resize(n_);
    kernels::coupling_mvm(inst_.j_data(), n_, s.values(), out);
  }
  double raw_sum(std::size_t i, const SpinState& s) const {
    return row_dot(inst_.j_row(i), s.values());
  }

  // Accumulated quantized products for every spin (quantized mode only).
  void quantized_sums(const SpinState& s, std::vector<double>& out) const {
    out.resize(n_);
    kernels::coupling_mvm(product_slope_, n_, s.values(), out);
    for (std::size_t i = 0; i < n_; ++i) out[i] += product_offset_[i];
  }
  double quantized_sum(std::size_t i, const SpinState& s) const {
    return product_offset_[i] + row_dot({product_slope_.data() + i * n_, n_}, s.values());
  }

  // New spin value. `acc` is the raw sum in full precision and the quantized
  // sum in quantized mode.
  double update(std::size_t i, double acc, double spin, double beta, double xi, double eta,
                double z, bool inertia) const {
    const double h = inst_.h()[i];
    if (!quantized()) {
      const double field = scale_ * acc + h;
      double drive = std::tanh(beta * field);
      if (inertia) drive += xi * spin;
      drive += eta * z;
      return spin_sign(drive);
    }
    const auto& fmt = *precision_.format;
    const double field = quantize(scale_ * acc + h, fmt);
    const double act = quantize((*lut_)(quantize(beta * field, fmt)), fmt);
    const double noise = quantize(eta * z, fmt);
    double sum = act;
    if (inertia) sum += quantize(xi * spin, fmt);
    sum += noise;
    return spin_sign(quantize(sum, fmt));
  }

 private:
  const IsingInstance& inst_;
  std::size_t n_;
  double scale_;
  Precision precision_;
  std::optional<TanhLut> lut_;
  std::vector<double> product_slope_;
  std::vector<double> product_offset_;
};

void check_step_inputs(const IsingInstance& inst, const SpinState& s) {
  if (inst.size() != s.size()) throw_invalid("spin state does not match instance size");
}

// One fully parallel step; `sums` are the pre-step accumulations.
std::size_t parallel_update(const Datapath& dp, const SpinState& s,
                            const std::vector<double>& sums, std::size_t t,
                            const Schedule& sched, const NoiseSource& noise, bool inertia,
                            SpinState& next) {
  const std::size_t n = dp.size();
  const double beta = sched.beta(t);
  const double eta = sched.eta(t);
  const double xi = sched.xi();
  std::size_t flips = 0;
  next = s;
  for (std::size_t i = 0; i < n; ++i) {
    const double z = noise.sample(static_cast<std::uint64_t>(t) * n + i);
    const double v = dp.update(i, sums[i], s[i], beta, xi, eta, z, inertia);
    if (v != s[i]) {
      next.flip(i);
      ++flips;
    }
  }
  return flips;
}

SpinState parallel_step(const IsingInstance& inst, const SpinState& s, std::size_t t,
                        const Schedule& sched, const NoiseSource& noise,
                        const Precision& precision, bool inertia) {
  check_step_inputs(inst, s);
  const Datapath dp(inst, precision);
  std::vector<double> sums;
  if (dp.quantized()) {
    dp.quantized_sums(s, sums);
  } else {
    dp.raw_sums(s, sums);
  }
  SpinState next;
  parallel_update(dp, s, sums, t, sched, noise, inertia, next);
  return next;
}

double sequential_new_spin(const Datapath& dp, const SpinState& s, std::size_t t,
                           const Schedule& sched, const NoiseSource& noise, double* raw_out) {
  const std::size_t i = t % dp.size();
  const double raw = dp.raw_sum(i, s);
  if (raw_out != nullptr) *raw_out = raw;
  const double acc = dp.quantized() ? dp.quantized_sum(i, s) : raw;
  const double z = noise.sample(static_cast<std::uint64_t>(t));
  return dp.update(i, acc, s[i], sched.beta(t), 0.0, sched.eta(t), z, false);
}

double energy_from_sums(const IsingInstance& inst, const SpinState& s,
                        const std::vector<double>& raw) {
  double pair = 0.0;
  double bias = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    pair += s[i] * raw[i];
    bias += inst.h()[i] * s[i];
  }
  return -0.5 * pair - bias;
}

}  // namespace

SpinState step_conv_sequential(const IsingInstance& inst, const SpinState& s, std::size_t t,
                               const Schedule& sched, const NoiseSource& noise,
                               const Precision& precision) {
  check_step_inputs(inst, s);
  const Datapath dp(inst, precision);
  SpinState next = s;
  const double v = sequential_new_spin(dp, s, t, sched, noise, nullptr);
  next.set(t % inst.size(), v);
  return next;
}

SpinState step_conv_parallel(const IsingInstance& inst, const SpinState& s, std::size_t t,
                             const Schedule& sched, const NoiseSource& noise,
                             const Precision& precision) {
  return parallel_step(inst, s, t, sched, noise, precision, false);
}

SpinState step_pimi(const IsingInstance& inst, const SpinState& s, std::size_t t,
                    const Schedule& sched, const NoiseSource& noise, const Precision& precision) {
  if (!(sched.xi() >= 0.0)) throw_invalid("PIMI requires xi >= 0");
  return parallel_step(inst, s, t, sched, noise, precision, true);
}

TrialRecord run_trial(const IsingInstance& inst, SolverKind kind, const Schedule& sched,
                      const SpinState& init, const NoiseSource& noise,
                      const TrialOptions& options) {
  check_step_inputs(inst, init);
  const std::size_t t_steps = sched.t_steps();
  if (t_steps < 1) throw_invalid("run_trial needs at least one step");

  const Datapath dp(inst, options.precision);
  TrialRecord rec;
  rec.t_steps = t_steps;
  rec.seed = noise.seed();
  rec.best_energy = std::numeric_limits<double>::infinity();
  if (options.record_energy) rec.energy_trajectory.emplace().reserve(t_steps);
  if (options.record_states) {
    rec.state_trajectory.emplace().reserve(t_steps + 1);
    rec.state_trajectory->push_back(init);
  }

  SpinState s = init;
  std::vector<double> raw;
  dp.raw_sums(s, raw);
  double e = energy_from_sums(inst, s, raw);

  auto record = [&](std::size_t t) {
    if (e < rec.best_energy) {
      rec.best_energy = e;
      rec.best_step = t;
      rec.improvements.emplace_back(t, e);
    }
    if (options.record_energy) rec.energy_trajectory->push_back(e);
    if (options.record_states) rec.state_trajectory->push_back(s);
  };

  if (kind == SolverKind::ConvSequential) {
    for (std::size_t t = 0; t < t_steps; ++t) {
      const std::size_t i = t % inst.size();
      double raw_i = 0.0;
      const double v = sequential_new_spin(dp, s, t, sched, noise, &raw_i);
      if (v != s[i]) {
        // Flipping spin i changes H by 2 s_i I_i with the pre-flip field.
        e += 2.0 * s[i] * (raw_i + inst.h()[i]);
        s.flip(i);
      }
      record(t);
    }
  } else {
    const bool inertia = kind == SolverKind::Pimi;
    if (inertia && !(sched.xi() >= 0.0)) throw_invalid("PIMI requires xi >= 0");
    std::vector<double> qsums;
    if (dp.quantized()) dp.quantized_sums(s, qsums);
    SpinState next;
    for (std::size_t t = 0; t < t_steps; ++t) {
      const auto& sums = dp.quantized() ? qsums : raw;
      const std::size_t flips = parallel_update(dp, s, sums, t, sched, noise, inertia, next);
      std::swap(s, next);
      if (flips > 0) {
        dp.raw_sums(s, raw);
        if (dp.quantized()) dp.quantized_sums(s, qsums);
        e = energy_from_sums(inst, s, raw);
      }
      record(t);
    }
  }
  rec.final_spins = std::move(s);
  return rec;
}

std::uint64_t trial_seed(std::uint64_t base_seed, std::size_t instance_index,
                         std::size_t trial_index) {
  return derive_seed(base_seed, instance_index, trial_index);
}

SpinState trial_initial_state(std::size_t n, std::uint64_t seed) {
  return SpinState::random(n, stream_seed(seed, Stream::InitialSpins));
}

NoiseSource trial_noise(SolverKind kind, std::uint64_t seed) {
  return NoiseSource::for_solver(kind, stream_seed(seed, Stream::UpdateNoise));
}

}  // namespace pimi
