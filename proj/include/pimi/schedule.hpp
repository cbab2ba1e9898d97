#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace pimi {

enum class ScheduleKind { PimiBench, ConvBench, PimiMimo, ConvMimo, Custom };

enum class ProblemFamily { MaxCut, Sk, Mimo };

std::string_view to_string(ScheduleKind kind);
ScheduleKind parse_schedule_kind(std::string_view name);
std::string_view to_string(ProblemFamily family);
ProblemFamily parse_problem_family(std::string_view name);

// Tunable shape parameters. Only the fields used by a kind are read.
struct ScheduleParams {
  // PimiBench: beta(t) = beta_scale * tanh(beta_init + delta_beta * t).
  // ConvBench: beta(t) = beta_scale.
  double beta_scale = 0.0;
  double beta_init = 0.0;
  double delta_beta = 0.0;
  // ConvBench: eta(t) = max(eta_scale / sqrt(t + 1), eta_floor).
  double eta_scale = 0.0;
  double eta_floor = 0.0;
  // PimiMimo: eta(t) = sqrt(1 / (5 gamma(t))), gamma linear over the trial.
  double gamma_init = 0.0;
  double gamma_final = 0.0;
  double xi = 0.0;
  // Custom: explicit per-step tables.
  std::vector<double> beta_table;
  std::vector<double> eta_table;
};

// Per-step inverse temperature and noise amplitude plus a constant
// self-alignment strength. Immutable once built.
class Schedule {
 public:
  ScheduleKind kind() const noexcept { return kind_; }
  double xi() const noexcept { return xi_; }
  std::size_t t_steps() const noexcept { return beta_.size(); }
  double beta(std::size_t t) const { return beta_.at(t); }
  double eta(std::size_t t) const { return eta_.at(t); }

  // Same shape with a different xi (used by diagnostics sweeping xi).
  Schedule with_xi(double xi) const;

 private:
  friend Schedule make_schedule(ScheduleKind, const ScheduleParams&, std::size_t);
  ScheduleKind kind_ = ScheduleKind::Custom;
  double xi_ = 0.0;
  std::vector<double> beta_;
  std::vector<double> eta_;
};

Schedule make_schedule(ScheduleKind kind, const ScheduleParams& params, std::size_t t_steps);

// Shipped defaults, versioned. Values were found by a coarse grid search at
// desk scale; see params/schedule_defaults.conf.
inline constexpr std::string_view kDefaultParamsVersion = "pimi-lab-defaults-1";

// Parsed key-value parameter set: "<family>.<kind>.<field> = value", with an
// optional size bucket "<family>.<kind>@<n_max>.<field>" chosen as the
// smallest n_max >= N.
class ScheduleDefaults {
 public:
  static const ScheduleDefaults& builtin();
  static ScheduleDefaults load(const std::filesystem::path& path);
  static ScheduleDefaults parse(std::string_view text);

  ScheduleParams lookup(ProblemFamily family, ScheduleKind kind, std::size_t n) const;
  const std::string& version() const noexcept { return version_; }
  std::string serialize() const;

 private:
  std::string version_;
  // key without bucket -> (bucket n_max, 0 for unbucketed) -> value
  std::map<std::string, std::map<std::size_t, double>> values_;
};

// A single schedule written out as a file:
//   kind = pimi-bench
//   beta_scale = 4.0
//   ...
// Custom schedules give comma-separated beta_table / eta_table lists.
struct ScheduleSpec {
  ScheduleKind kind = ScheduleKind::Custom;
  ScheduleParams params;
};
ScheduleSpec parse_schedule_spec(std::string_view text);

// The builtin defaults as config text (what params/schedule_defaults.conf holds).
std::string_view builtin_defaults_text();

}  // namespace pimi
