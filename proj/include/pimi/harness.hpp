#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "pimi/io.hpp"
#include "pimi/metrics.hpp"
#include "pimi/mimo.hpp"
#include "pimi/oracle.hpp"
#include "pimi/schedule.hpp"
#include "pimi/solvers.hpp"

namespace pimi {

enum class ExperimentFamily { MaxCutBench, SkBench, MimoBer, FlipRate };

std::string_view to_string(ExperimentFamily f);  // "maxcut-bench" | "sk-bench" | "mimo-ber" | "flip-rate"
ExperimentFamily parse_experiment_family(std::string_view name);

inline constexpr int kManifestSchema = 1;

// Plain-text "key = value" experiment description. Unknown keys are rejected
// so that a typo cannot silently fall back to a default.
//
//   schema = 1
//   family = maxcut-bench
//   seed = 1
//   sizes = 10,20
//   ...
struct ExperimentManifest {
  ExperimentFamily family = ExperimentFamily::MaxCutBench;
  std::uint64_t seed = 0;
  std::string params = "builtin";  // or a path to a schedule-defaults file

  // maxcut-bench / sk-bench
  std::vector<std::size_t> sizes{10, 20};
  std::size_t instances = 20;
  std::size_t trials = 256;
  std::size_t steps_per_spin = 100;  // T = steps_per_spin * N
  std::vector<SolverKind> solvers{SolverKind::Pimi, SolverKind::ConvParallel,
                                  SolverKind::ConvSequential};
  std::string oracle = "auto";  // auto | exhaustive | sa | bls
  double edge_prob = 0.5;
  std::size_t grid_step = 10;
  double threshold_fraction = 0.999;
  double epsilon = kDefaultEpsilon;

  // mimo-ber
  std::size_t nt = 4;
  std::size_t nr = 4;
  int qam = 4;
  std::vector<double> ebn0_db{0.0, 4.0, 8.0, 12.0};
  std::size_t scenarios = 2000;
  std::vector<DetectorKind> detectors{DetectorKind::Mmse, DetectorKind::Pimi};
  std::size_t mimo_trials = 32;
  std::size_t mimo_steps = 32;

  // flip-rate (uses sizes[0], trials, steps_per_spin)
  std::string flip_family = "sk1";
  std::vector<double> xis{0.0, 0.3, 0.6, 0.9};

  static ExperimentManifest parse(std::string_view text);
  static ExperimentManifest load(const std::filesystem::path& path);
  // Canonical text: every key, fixed order. Hashing this text identifies the run.
  std::string canonical() const;
  std::uint64_t hash() const;
};

std::string hex64(std::uint64_t v);
std::uint64_t fnv1a64(std::string_view bytes);

struct RunOptions {
  std::size_t workers = 1;
  bool resume = true;  // skip stages listed in a matching checkpoint
};

struct ArchiveSummary {
  std::filesystem::path dir;
  std::vector<std::string> stages_run;
  std::vector<std::string> stages_skipped;
};

// Executes the manifest into `out_dir`. Each stage reads only the files written
// by earlier stages and appends its name to checkpoint.txt when done, so a
// failed run keeps the completed stages and a rerun resumes after them.
// stamp.txt records the manifest hash and the schedule-defaults version.
ArchiveSummary run_experiment(const ExperimentManifest& manifest,
                              const std::filesystem::path& out_dir, const RunOptions& options = {});

struct Report {
  CsvTable table;                 // per (n, solver) or per (detector, ebn0)
  std::vector<std::string> missing_ground;  // instance files without ground truth
  std::string text;               // plain-text summary

  bool empty() const noexcept { return table.rows.empty(); }
};

// Builds the report from an archive directory (landscape_*.csv, ber_*.csv,
// instances/ and gs_*.json). An empty directory gives an empty report.
Report summarize(const std::filesystem::path& archive);
void write_report(const Report& report, const std::filesystem::path& out_dir);

// Landscape CSV (t_steps, p_mean, p_logstd, n_trials, ccts).
CsvTable landscape_table(const CctsLandscape& land);

// Records + ground truths -> landscape, shared by the CLI and the harness.
CctsLandscape landscape_from_records(const std::vector<RecordLine>& lines,
                                     const GroundMap& ground, CostModel model,
                                     const std::vector<std::size_t>& grid,
                                     double threshold_fraction = 0.999,
                                     double epsilon = kDefaultEpsilon, bool integer_trials = true);

CostModel cost_model_for(SolverKind kind);

// Oracle selection used by "auto": exhaustive up to 24 spins, SA above.
OracleResult run_oracle(const IsingInstance& inst, std::string_view method, std::uint64_t seed,
                        std::size_t workers);

// Default schedule of a benchmark family for a solver kind at size n.
Schedule bench_schedule(const ScheduleDefaults& defaults, ProblemFamily family, SolverKind kind,
                        std::size_t n, std::size_t t_steps);

}  // namespace pimi
