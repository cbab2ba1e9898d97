#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pimi/core.hpp"

namespace pimi {

// A trial succeeds once its best-so-far energy reaches
// theta = threshold_fraction * ground_energy.
struct SuccessCriterion {
  double ground_energy = 0.0;
  double threshold_fraction = 0.999;

  double threshold() const noexcept { return threshold_fraction * ground_energy; }
  bool reached(double best_energy) const noexcept { return best_energy <= threshold(); }
};

// Fraction of trials whose best energy within the first `budget` steps meets
// the criterion. budget = 0 means the whole trial.
double success_probability(const std::vector<TrialRecord>& records,
                           const SuccessCriterion& criterion, std::size_t budget = 0);

inline constexpr double kDefaultEpsilon = 1e-3;

// ceil(log eps / log(1 - p)); nullopt is the "never succeeds" sentinel (p = 0).
// With `integer_trials` unset the real-valued ratio is returned instead.
std::optional<double> n_trials_required(double p_bar, double epsilon = kDefaultEpsilon,
                                        bool integer_trials = true);

enum class CostModel { Seq, Par, Pimi };

std::string_view to_string(CostModel model);  // "seq" | "par" | "pimi"
CostModel parse_cost_model(std::string_view name);

// Fitted FPGA timing models. Seq is fitted per sweep (N single-spin steps).
double clock_cycles_per_sweep(CostModel model, std::size_t n);
double clock_cycles_per_step(CostModel model, std::size_t n);

// n_trials * T * C_step(N); nullopt when p = 0.
std::optional<double> ccts(double p_bar, std::size_t t_steps, CostModel model, std::size_t n,
                           double epsilon = kDefaultEpsilon, bool integer_trials = true);

struct LandscapePoint {
  std::size_t t_steps = 0;
  double p_mean = 0.0;
  double p_logstd = 0.0;  // std over instances of log10 p_j (instances with p_j > 0)
  std::optional<double> n_trials;
  std::optional<double> ccts;
};

struct CctsLandscape {
  std::size_t n = 0;
  CostModel model = CostModel::Pimi;
  std::vector<LandscapePoint> grid;
  std::optional<std::size_t> optimum;  // index into grid; empty when unsolved

  bool solved() const noexcept { return optimum.has_value(); }
  const LandscapePoint& best() const;
};

// "start:stop:step" inclusive, e.g. "10:2000:10".
std::vector<std::size_t> parse_grid(std::string_view text);
std::vector<std::size_t> default_grid(std::size_t t_max, std::size_t step = 10);

// Mean success probability (averaged over instances first) and its log-space
// spread for each step budget in `grid`. records[i] and criteria[i] belong to
// instance i.
std::vector<LandscapePoint> success_curve(const std::vector<std::vector<TrialRecord>>& records,
                                          const std::vector<SuccessCriterion>& criteria,
                                          const std::vector<std::size_t>& grid);

// Fills n_trials / ccts for every point and picks the minimum-CCTS budget,
// ties going to the smaller T. Needs at least two grid points.
CctsLandscape optimize_step_budget(std::vector<LandscapePoint> points, CostModel model,
                                   std::size_t n, double epsilon = kDefaultEpsilon,
                                   bool integer_trials = true);

double speedup(double ccts_conv, double ccts_pimi);
double wall_clock(double ccts, double f_clk_hz);

// Mean and standard deviation of log10 over positive values.
struct LogStats {
  double mean = 0.0;
  double std = 0.0;
  std::size_t count = 0;
};
LogStats log10_stats(const std::vector<double>& values);

// Designed FPGA clock frequencies of the MIMO detector builds (16-QAM).
inline constexpr double kFclkPimiMimo8x8Hz = 274.0e6;
inline constexpr double kFclkConvMimo8x8Hz = 247.2e6;
inline constexpr double kFclkPimiMimo16x16Hz = 258.1e6;
inline constexpr double kFclkConvMimo16x16Hz = 267.1e6;

// Detection throughput requirements, in MIMO instances per millisecond.
inline constexpr double kLteInstancesPerMs = 8400.0;
inline constexpr double k5gInstancesPerMs = 35640.0;

// P_NT(t): among (spin, trial) pairs where at least one coupled neighbour
// (J_ij != 0) flips between states t and t+1, the fraction where the spin
// flips too. Steps without any such event are nullopt. Each trajectory holds
// the initial state followed by the state after every step.
std::vector<std::optional<double>> neighbor_triggered_flip_rate(
    const std::vector<std::vector<SpinState>>& trajectories, const IsingInstance& inst);

// Mean over the defined entries; nullopt if none are defined.
std::optional<double> mean_defined(const std::vector<std::optional<double>>& values);

}  // namespace pimi
