// pimi_lab: command-line front end for the solver lab.
//
//   pimi_lab generate  --family maxcut --n 20 --count 20 --seed 1 --out inst/
//   pimi_lab oracle    --method exhaustive --in inst/ --out gs.json
//   pimi_lab solve     --in inst/ --kind pimi --steps 2000 --trials 256 --out results.jsonl
//   pimi_lab ccts      --records results.jsonl --ground gs.json --model pimi --out landscape.csv
//   pimi_lab mimo-ber  --nt 4 --nr 4 --qam 4 --ebn0 0:2:12 --detector pimi --out ber.csv
//   pimi_lab flip-rate --records traj.jsonl --instance inst.json --out pnt.csv
//   pimi_lab report    --archive run/
//   pimi_lab run       --manifest exp.conf --out run/
//
// Exit codes: 0 success, 2 invalid input, 3 numeric failure, 4 unsolved landscape.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include <CLI11.hpp>

#include "pimi/batch.hpp"
#include "pimi/harness.hpp"
#include "pimi/instances.hpp"
#include "pimi/io.hpp"
#include "pimi/metrics.hpp"
#include "pimi/mimo.hpp"
#include "pimi/oracle.hpp"
#include "pimi/rng.hpp"
#include "pimi/solvers.hpp"

namespace {

using namespace pimi;

// Eb/N0 list: "12", "0,6,12", "inf", or "start:step:stop".
std::vector<double> parse_ebn0_list(const std::string& text) {
  auto number = [&](const std::string& s) {
    if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size()) throw_invalid("bad Eb/N0 value '" + s + "'");
    return v;
  };
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.size() != 3) throw_invalid("Eb/N0 range must be start:step:stop");
    const double a = number(parts[0]), step = number(parts[1]), b = number(parts[2]);
    if (!(step > 0.0) || b < a) throw_invalid("Eb/N0 range needs step > 0 and stop >= start");
    const auto count = static_cast<std::size_t>(std::floor((b - a) / step + 1e-9)) + 1;
    for (std::size_t k = 0; k < count; ++k) out.push_back(a + step * static_cast<double>(k));
    return out;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(number(item));
  if (out.empty()) throw_invalid("empty Eb/N0 list");
  return out;
}

ProblemFamily family_of(const std::string& filename, const std::string& fallback) {
  if (!fallback.empty()) return parse_problem_family(fallback);
  if (filename.rfind("maxcut", 0) == 0) return ProblemFamily::MaxCut;
  if (filename.rfind("sk1", 0) == 0) return ProblemFamily::Sk;
  throw_invalid("cannot tell the problem family of '" + filename + "'; pass --family");
}

Precision precision_from(const std::string& quantized, int tanh_levels) {
  if (quantized.empty() || quantized == "none") return Precision::full();
  return Precision::fixed(FixedPointFormat::parse(quantized), tanh_levels);
}

std::ostream& open_out(const std::string& path, std::ofstream& file) {
  if (path.empty() || path == "-") return std::cout;
  const fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  file.open(p, std::ios::binary);
  if (!file) throw_invalid("cannot write " + path);
  return file;
}

struct GenerateArgs {
  std::string family = "maxcut";
  std::size_t n = 20;
  std::size_t count = 1;
  std::uint64_t seed = 0;
  double edge_prob = 0.5;
  std::string out = ".";
};

int cmd_generate(const GenerateArgs& a) {
  const InstanceFamily fam = parse_instance_family(a.family);
  for (std::size_t k = 0; k < a.count; ++k) {
    GeneratorSpec spec{fam, a.n, instance_seed(a.seed, a.n, k), a.edge_prob};
    const fs::path path = fs::path(a.out) / instance_filename(fam, a.n, k);
    if (fam == InstanceFamily::MaxCutER) {
      const auto mc = gen_maxcut(spec);
      write_instance(path, mc.ising, mc.edge_count);
    } else {
      write_instance(path, gen_sk1(spec));
    }
  }
  return 0;
}

struct OracleArgs {
  std::string method = "exhaustive";
  std::string in;
  std::string out = "gs.json";
  std::uint64_t seed = 0;
  std::size_t workers = 1;
};

int cmd_oracle(const OracleArgs& a) {
  GroundMap ground;
  const auto files = list_instances(a.in);
  for (std::size_t k = 0; k < files.size(); ++k) {
    const auto inst = read_instance(files[k]).inst;
    const auto res = run_oracle(inst, a.method, derive_seed(a.seed, k), a.workers);
    ground[files[k].filename().string()] = ground_from(res);
  }
  write_ground(a.out, ground);
  return 0;
}

struct SolveArgs {
  std::string in;
  std::string kind = "pimi";
  std::string schedule = "default";
  std::string params;
  std::string family;
  std::size_t steps = 1000;
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  std::size_t workers = 1;
  std::string quantized;
  int tanh_levels = 4;
  std::optional<double> xi;
  bool record_energy = false;
  bool record_states = false;
  std::string out = "-";
};

int cmd_solve(const SolveArgs& a) {
  const SolverKind kind = parse_solver_kind(a.kind);
  const auto files = list_instances(a.in);
  if (files.empty()) throw_invalid("no instance files under " + a.in);
  const ScheduleDefaults defaults =
      a.params.empty() ? ScheduleDefaults::builtin() : ScheduleDefaults::load(a.params);

  std::vector<IsingInstance> insts;
  std::vector<Schedule> schedules;
  for (const auto& f : files) {
    insts.push_back(read_instance(f).inst);
    const std::size_t n = insts.back().size();
    Schedule sched;
    if (a.schedule == "default") {
      sched = bench_schedule(defaults, family_of(f.filename().string(), a.family), kind, n, a.steps);
    } else if (fs::is_regular_file(a.schedule)) {
      const auto spec = parse_schedule_spec(read_text(a.schedule));
      sched = make_schedule(spec.kind, spec.params, a.steps);
    } else {
      const ScheduleKind sk = parse_schedule_kind(a.schedule);
      const ProblemFamily fam = (sk == ScheduleKind::PimiMimo || sk == ScheduleKind::ConvMimo)
                                    ? ProblemFamily::Mimo
                                    : family_of(f.filename().string(), a.family);
      sched = make_schedule(sk, defaults.lookup(fam, sk, n), a.steps);
    }
    if (a.xi) sched = sched.with_xi(*a.xi);
    schedules.push_back(std::move(sched));
  }

  BatchConfig cfg;
  cfg.kind = kind;
  cfg.n_trials = a.trials;
  cfg.base_seed = a.seed;
  cfg.workers = a.workers;
  cfg.options.record_energy = a.record_energy;
  cfg.options.record_states = a.record_states;
  cfg.options.precision = precision_from(a.quantized, a.tanh_levels);
  const auto result = run_batch(insts, schedules, cfg);

  std::ofstream file;
  std::ostream& out = open_out(a.out, file);
  for (std::size_t i = 0; i < insts.size(); ++i) {
    std::vector<RecordLine> lines;
    for (std::size_t t = 0; t < result[i].size(); ++t) {
      lines.push_back({files[i].filename().string(), t, std::string(to_string(kind)), result[i][t]});
    }
    write_records(out, lines);
  }
  return 0;
}

struct CctsArgs {
  std::string records;
  std::string ground;
  std::string model;
  std::string grid;
  std::string out = "-";
  double epsilon = kDefaultEpsilon;
  double fraction = 0.999;
  bool real_trials = false;
};

int cmd_ccts(const CctsArgs& a) {
  const auto lines = read_records(a.records);
  if (lines.empty()) throw_invalid("no records in " + a.records);
  CostModel model;
  if (!a.model.empty()) {
    model = parse_cost_model(a.model);
  } else {
    model = cost_model_for(parse_solver_kind(lines.front().kind));
  }
  std::size_t t_max = 0;
  for (const auto& l : lines) t_max = std::max(t_max, l.record.t_steps);
  const auto grid = a.grid.empty() ? default_grid(t_max) : parse_grid(a.grid);
  const auto land = landscape_from_records(lines, read_ground(a.ground), model, grid, a.fraction,
                                           a.epsilon, !a.real_trials);
  std::ofstream file;
  open_out(a.out, file) << landscape_table(land).str();
  if (!land.solved()) {
    std::cerr << "pimi_lab: no step budget in the grid reached the success threshold\n";
    return static_cast<int>(ErrorKind::Unsolved);
  }
  const auto& best = land.best();
  std::cerr << "optimum: T=" << best.t_steps << " CCTS=" << format_number(*best.ccts)
            << " p=" << format_number(best.p_mean) << "\n";
  return 0;
}

struct MimoArgs {
  std::size_t nt = 4;
  std::size_t nr = 4;
  int qam = 4;
  std::string ebn0 = "0:2:12";
  std::size_t scenarios = 1000;
  std::string detector = "mmse";
  std::size_t trials = 32;
  std::size_t steps = 32;
  std::uint64_t seed = 0;
  std::size_t workers = 1;
  std::string params;
  std::string quantized;
  int tanh_levels = 4;
  bool unsliced_xm = false;
  std::string out = "-";
};

int cmd_mimo_ber(const MimoArgs& a) {
  BerConfig cfg;
  cfg.nt = a.nt;
  cfg.nr = a.nr;
  cfg.qam_order = a.qam;
  cfg.scenarios = a.scenarios;
  cfg.seed = a.seed;
  cfg.detector = parse_detector_kind(a.detector);
  cfg.trials = a.trials;
  cfg.steps = a.steps;
  cfg.workers = a.workers;
  cfg.precision = precision_from(a.quantized, a.tanh_levels);
  cfg.unsliced_xm = a.unsliced_xm;
  if (!a.params.empty() && cfg.detector != DetectorKind::Mmse) {
    const auto defaults = ScheduleDefaults::load(a.params);
    const std::size_t spins =
        2 * a.nt * static_cast<std::size_t>(correction_multiplicity(default_correction_set(a.qam)));
    const ScheduleKind sk =
        cfg.detector == DetectorKind::Pimi ? ScheduleKind::PimiMimo : ScheduleKind::ConvMimo;
    cfg.params = defaults.lookup(ProblemFamily::Mimo, sk, spins);
  }
  CsvTable t;
  t.header = {"ebn0_db", "ber", "scenario_count", "detector"};
  for (double e : parse_ebn0_list(a.ebn0)) {
    const BerPoint pt = ber(cfg, e);
    t.rows.push_back({format_number(e), format_number(pt.ber), std::to_string(pt.scenario_count),
                      a.detector});
  }
  std::ofstream file;
  open_out(a.out, file) << t.str();
  return 0;
}

struct FlipArgs {
  std::string records;
  std::string instance;
  std::string out = "-";
};

int cmd_flip_rate(const FlipArgs& a) {
  const auto inst = read_instance(a.instance).inst;
  std::vector<std::vector<SpinState>> trajectories;
  for (auto& line : read_records(a.records)) {
    if (!line.record.state_trajectory) {
      throw_invalid("records lack state trajectories; solve with --record-states");
    }
    trajectories.push_back(std::move(*line.record.state_trajectory));
  }
  const auto rate = neighbor_triggered_flip_rate(trajectories, inst);
  CsvTable t;
  t.header = {"step", "p_nt"};
  for (std::size_t s = 0; s < rate.size(); ++s) t.rows.push_back({std::to_string(s), format_optional(rate[s])});
  std::ofstream file;
  open_out(a.out, file) << t.str();
  std::cerr << "mean P_NT over defined steps: " << format_optional(mean_defined(rate)) << "\n";
  return 0;
}

struct ReportArgs {
  std::string archive;
  std::string out;
};

int cmd_report(const ReportArgs& a) {
  const Report rep = summarize(a.archive);
  write_report(rep, a.out.empty() ? fs::path(a.archive) : fs::path(a.out));
  std::cout << rep.text;
  return 0;
}

struct RunArgs {
  std::string manifest;
  std::string out;
  std::size_t workers = 1;
  bool fresh = false;
};

int cmd_run(const RunArgs& a) {
  const auto m = ExperimentManifest::load(a.manifest);
  RunOptions opts;
  opts.workers = a.workers;
  opts.resume = !a.fresh;
  const auto summary = run_experiment(m, a.out, opts);
  std::cerr << "stages run: " << summary.stages_run.size()
            << ", skipped (checkpointed): " << summary.stages_skipped.size() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PIMI solver lab"};
  app.require_subcommand(1);

  std::size_t env_workers = 1;
  try {
    env_workers = default_workers(1);
  } catch (const Error& e) {
    std::cerr << "pimi_lab: " << e.what() << "\n";
    return static_cast<int>(e.kind());
  }

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "Write benchmark instances");
  g->add_option("--family", gen.family, "maxcut | sk1")->required();
  g->add_option("--n", gen.n, "Spin count")->required();
  g->add_option("--count", gen.count, "Number of instances");
  g->add_option("--seed", gen.seed, "Base seed");
  g->add_option("--edge-prob", gen.edge_prob, "Max-Cut edge probability");
  g->add_option("--out", gen.out, "Output directory")->required();

  OracleArgs orc;
  orc.workers = env_workers;
  auto* o = app.add_subcommand("oracle", "Ground-truth energies");
  o->add_option("--method", orc.method, "exhaustive | sa | bls | auto");
  o->add_option("--in", orc.in, "Instance file or directory")->required();
  o->add_option("--out", orc.out, "gs.json path");
  o->add_option("--seed", orc.seed, "Seed for the heuristic oracles");
  o->add_option("--workers", orc.workers, "Worker threads");

  SolveArgs sol;
  sol.workers = env_workers;
  auto* s = app.add_subcommand("solve", "Run solver trials");
  s->add_option("--in", sol.in, "Instance file or directory")->required();
  s->add_option("--kind", sol.kind, "pimi | conv-seq | conv-par");
  s->add_option("--schedule", sol.schedule, "default | <kind name> | <schedule file>");
  s->add_option("--params", sol.params, "Schedule-defaults file (default: builtin)");
  s->add_option("--family", sol.family, "maxcut | sk1 | mimo (default: from file name)");
  s->add_option("--steps", sol.steps, "Update steps per trial");
  s->add_option("--trials", sol.trials, "Trials per instance");
  s->add_option("--seed", sol.seed, "Base seed");
  s->add_option("--workers", sol.workers, "Worker threads");
  s->add_option("--quantized", sol.quantized, "Fixed-point format, e.g. q16.4");
  s->add_option("--tanh-levels", sol.tanh_levels, "LUT levels in quantized mode");
  s->add_option("--xi", sol.xi, "Override the self-alignment strength");
  s->add_flag("--record-energy", sol.record_energy, "Store per-step energies");
  s->add_flag("--record-states", sol.record_states, "Store per-step spin states");
  s->add_option("--out", sol.out, "JSONL output (- for stdout)");

  CctsArgs cc;
  auto* c = app.add_subcommand("ccts", "Success curve and CCTS landscape");
  c->add_option("--records", cc.records, "Records JSONL")->required();
  c->add_option("--ground", cc.ground, "gs.json")->required();
  c->add_option("--model", cc.model, "seq | par | pimi (default: from records)");
  c->add_option("--grid", cc.grid, "start:stop:step (default 10:T:10)");
  c->add_option("--epsilon", cc.epsilon, "Target failure probability");
  c->add_option("--fraction", cc.fraction, "Success threshold fraction of the ground energy");
  c->add_flag("--real-trials", cc.real_trials, "Use the real-valued trial count (no ceil)");
  c->add_option("--out", cc.out, "CSV output (- for stdout)");

  MimoArgs mi;
  mi.workers = env_workers;
  auto* mb = app.add_subcommand("mimo-ber", "MIMO detection bit error rate");
  mb->add_option("--nt", mi.nt, "Transmit antennas");
  mb->add_option("--nr", mi.nr, "Receive antennas");
  mb->add_option("--qam", mi.qam, "4 | 16 | 64");
  mb->add_option("--ebn0", mi.ebn0, "dB list: 12 | 0,6,12 | start:step:stop | inf");
  mb->add_option("--scenarios", mi.scenarios, "Scenarios per Eb/N0");
  mb->add_option("--detector", mi.detector, "mmse | pimi | conv-seq | conv-par");
  mb->add_option("--trials", mi.trials, "Solver trials per scenario");
  mb->add_option("--steps", mi.steps, "Update steps per trial");
  mb->add_option("--seed", mi.seed, "Base seed");
  mb->add_option("--workers", mi.workers, "Worker threads");
  mb->add_option("--params", mi.params, "Schedule-defaults file (default: builtin)");
  mb->add_option("--quantized", mi.quantized, "Fixed-point format, e.g. q16.4");
  mb->add_option("--tanh-levels", mi.tanh_levels, "LUT levels in quantized mode");
  mb->add_flag("--unsliced-xm", mi.unsliced_xm, "Center the search on the unsliced MMSE output");
  mb->add_option("--out", mi.out, "CSV output (- for stdout)");

  FlipArgs fl;
  auto* f = app.add_subcommand("flip-rate", "Neighbour-triggered flip rate");
  f->add_option("--records", fl.records, "Records JSONL with state trajectories")->required();
  f->add_option("--instance", fl.instance, "Instance file")->required();
  f->add_option("--out", fl.out, "CSV output (- for stdout)");

  ReportArgs rp;
  auto* r = app.add_subcommand("report", "Summarize an archive");
  r->add_option("--archive", rp.archive, "Archive directory")->required();
  r->add_option("--out", rp.out, "Output directory (default: the archive)");

  RunArgs rn;
  rn.workers = env_workers;
  auto* run = app.add_subcommand("run", "Execute an experiment manifest");
  run->add_option("--manifest", rn.manifest, "Manifest file")->required();
  run->add_option("--out", rn.out, "Archive directory")->required();
  run->add_option("--workers", rn.workers, "Worker threads");
  run->add_flag("--fresh", rn.fresh, "Ignore an existing checkpoint");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(ErrorKind::InvalidArgument);
  }

  try {
    if (*g) return cmd_generate(gen);
    if (*o) return cmd_oracle(orc);
    if (*s) return cmd_solve(sol);
    if (*c) return cmd_ccts(cc);
    if (*mb) return cmd_mimo_ber(mi);
    if (*f) return cmd_flip_rate(fl);
    if (*r) return cmd_report(rp);
    if (*run) return cmd_run(rn);
  } catch (const Error& e) {
    std::cerr << "pimi_lab: " << e.what() << "\n";
    return static_cast<int>(e.kind());
  } catch (const fs::filesystem_error& e) {
    std::cerr << "pimi_lab: " << e.what() << "\n";
    return static_cast<int>(ErrorKind::InvalidArgument);
  } catch (const std::exception& e) {
    std::cerr << "pimi_lab: " << e.what() << "\n";
    return static_cast<int>(ErrorKind::Numeric);
  }
  return 0;
}
