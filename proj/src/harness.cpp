#include "pimi/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

#include "pimi/batch.hpp"
#include "pimi/instances.hpp"
#include "pimi/rng.hpp"

namespace pimi {

std::string_view to_string(ExperimentFamily f) {
  switch (f) {
    case ExperimentFamily::MaxCutBench: return "maxcut-bench";
    case ExperimentFamily::SkBench: return "sk-bench";
    case ExperimentFamily::MimoBer: return "mimo-ber";
    case ExperimentFamily::FlipRate: return "flip-rate";
  }
  return "maxcut-bench";
}

ExperimentFamily parse_experiment_family(std::string_view name) {
  for (auto f : {ExperimentFamily::MaxCutBench, ExperimentFamily::SkBench,
                 ExperimentFamily::MimoBer, ExperimentFamily::FlipRate}) {
    if (to_string(f) == name) return f;
  }
  throw_invalid("unknown experiment family '" + std::string(name) + "'");
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int k = 15; k >= 0; --k, v >>= 4) s[static_cast<std::size_t>(k)] = digits[v & 0xF];
  return s;
}

// ---------------------------------------------------------------------------
// Manifest

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  unsigned long long x = 0;
  try {
    if (!v.empty() && v[0] == '-') throw std::invalid_argument("negative");
    x = std::stoull(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size()) throw_invalid("manifest key '" + key + "' needs an unsigned integer");
  return x;
}

double to_real(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size()) throw_invalid("manifest key '" + key + "' needs a number");
  return x;
}

template <class T, class F>
std::string join(const std::vector<T>& items, F fmt) {
  std::string out;
  for (std::size_t k = 0; k < items.size(); ++k) {
    if (k) out += ",";
    out += fmt(items[k]);
  }
  return out;
}

}  // namespace

ExperimentManifest ExperimentManifest::parse(std::string_view text) {
  ExperimentManifest m;
  std::map<std::string, std::string> kv;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw_invalid("manifest line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (!kv.emplace(key, value).second) throw_invalid("manifest key '" + key + "' given twice");
  }
  const auto schema = kv.find("schema");
  if (schema == kv.end()) throw_invalid("manifest lacks 'schema'");
  if (to_u64("schema", schema->second) != static_cast<std::uint64_t>(kManifestSchema)) {
    throw_invalid("unsupported manifest schema " + schema->second);
  }
  kv.erase(schema);

  for (const auto& [key, v] : kv) {
    if (key == "family") m.family = parse_experiment_family(v);
    else if (key == "seed") m.seed = to_u64(key, v);
    else if (key == "params") m.params = v;
    else if (key == "sizes") {
      m.sizes.clear();
      for (const auto& s : split_list(v)) m.sizes.push_back(to_u64(key, s));
    } else if (key == "instances") m.instances = to_u64(key, v);
    else if (key == "trials") m.trials = to_u64(key, v);
    else if (key == "steps_per_spin") m.steps_per_spin = to_u64(key, v);
    else if (key == "solvers") {
      m.solvers.clear();
      for (const auto& s : split_list(v)) m.solvers.push_back(parse_solver_kind(s));
    } else if (key == "oracle") m.oracle = v;
    else if (key == "edge_prob") m.edge_prob = to_real(key, v);
    else if (key == "grid_step") m.grid_step = to_u64(key, v);
    else if (key == "threshold_fraction") m.threshold_fraction = to_real(key, v);
    else if (key == "epsilon") m.epsilon = to_real(key, v);
    else if (key == "nt") m.nt = to_u64(key, v);
    else if (key == "nr") m.nr = to_u64(key, v);
    else if (key == "qam") m.qam = static_cast<int>(to_u64(key, v));
    else if (key == "ebn0_db") {
      m.ebn0_db.clear();
      for (const auto& s : split_list(v)) m.ebn0_db.push_back(to_real(key, s));
    } else if (key == "scenarios") m.scenarios = to_u64(key, v);
    else if (key == "detectors") {
      m.detectors.clear();
      for (const auto& s : split_list(v)) m.detectors.push_back(parse_detector_kind(s));
    } else if (key == "mimo_trials") m.mimo_trials = to_u64(key, v);
    else if (key == "mimo_steps") m.mimo_steps = to_u64(key, v);
    else if (key == "flip_family") m.flip_family = v;
    else if (key == "xis") {
      m.xis.clear();
      for (const auto& s : split_list(v)) m.xis.push_back(to_real(key, s));
    } else {
      throw_invalid("unknown manifest key '" + key + "'");
    }
  }

  if (m.sizes.empty()) throw_invalid("manifest 'sizes' is empty");
  for (auto n : m.sizes) {
    if (n < 2) throw_invalid("manifest sizes must be >= 2");
  }
  if (m.instances < 1 || m.trials < 1 || m.steps_per_spin < 1 || m.grid_step < 1) {
    throw_invalid("instances, trials, steps_per_spin and grid_step must be >= 1");
  }
  if (m.solvers.empty()) throw_invalid("manifest 'solvers' is empty");
  if (m.oracle != "auto") parse_oracle_method(m.oracle);
  if (!(m.threshold_fraction > 0.0 && m.threshold_fraction <= 1.0)) {
    throw_invalid("threshold_fraction must lie in (0, 1]");
  }
  if (m.family == ExperimentFamily::MimoBer) {
    Constellation c(m.qam);
    if (m.nt < 1 || m.nr < 1 || m.scenarios < 1 || m.mimo_trials < 1 || m.mimo_steps < 1) {
      throw_invalid("nt, nr, scenarios, mimo_trials and mimo_steps must be >= 1");
    }
    if (m.ebn0_db.empty() || m.detectors.empty()) throw_invalid("ebn0_db and detectors must be non-empty");
  }
  if (m.family == ExperimentFamily::FlipRate) {
    parse_instance_family(m.flip_family);
    if (m.xis.empty()) throw_invalid("manifest 'xis' is empty");
    for (double xi : m.xis) {
      if (!(xi >= 0.0)) throw_invalid("xi values must be >= 0");
    }
  }
  return m;
}

ExperimentManifest ExperimentManifest::load(const std::filesystem::path& path) {
  try {
    return parse(read_text(path));
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

std::string ExperimentManifest::canonical() const {
  std::ostringstream out;
  auto num = [](double v) { return format_number(v); };
  auto uint = [](std::size_t v) { return std::to_string(v); };
  out << "schema = " << kManifestSchema << "\n";
  out << "family = " << to_string(family) << "\n";
  out << "seed = " << seed << "\n";
  out << "params = " << params << "\n";
  out << "sizes = " << join(sizes, uint) << "\n";
  out << "instances = " << instances << "\n";
  out << "trials = " << trials << "\n";
  out << "steps_per_spin = " << steps_per_spin << "\n";
  out << "solvers = " << join(solvers, [](SolverKind k) { return std::string(to_string(k)); }) << "\n";
  out << "oracle = " << oracle << "\n";
  out << "edge_prob = " << num(edge_prob) << "\n";
  out << "grid_step = " << grid_step << "\n";
  out << "threshold_fraction = " << num(threshold_fraction) << "\n";
  out << "epsilon = " << num(epsilon) << "\n";
  out << "nt = " << nt << "\n";
  out << "nr = " << nr << "\n";
  out << "qam = " << qam << "\n";
  out << "ebn0_db = " << join(ebn0_db, num) << "\n";
  out << "scenarios = " << scenarios << "\n";
  out << "detectors = " << join(detectors, [](DetectorKind k) { return std::string(to_string(k)); }) << "\n";
  out << "mimo_trials = " << mimo_trials << "\n";
  out << "mimo_steps = " << mimo_steps << "\n";
  out << "flip_family = " << flip_family << "\n";
  out << "xis = " << join(xis, num) << "\n";
  return out.str();
}

std::uint64_t ExperimentManifest::hash() const { return fnv1a64(canonical()); }

// ---------------------------------------------------------------------------
// Shared pieces

CostModel cost_model_for(SolverKind kind) {
  switch (kind) {
    case SolverKind::ConvSequential: return CostModel::Seq;
    case SolverKind::ConvParallel: return CostModel::Par;
    case SolverKind::Pimi: return CostModel::Pimi;
  }
  return CostModel::Pimi;
}

OracleResult run_oracle(const IsingInstance& inst, std::string_view method, std::uint64_t seed,
                        std::size_t workers) {
  OracleMethod m;
  if (method == "auto") {
    m = inst.size() <= kExhaustiveMaxSpins ? OracleMethod::Exhaustive : OracleMethod::SimAnneal;
  } else {
    m = parse_oracle_method(method);
  }
  switch (m) {
    case OracleMethod::Exhaustive: return exhaustive(inst);
    case OracleMethod::SimAnneal: {
      SimAnnealOptions o;
      o.seed = seed;
      o.workers = workers;
      return sim_anneal_oracle(inst, o);
    }
    case OracleMethod::LocalSearch: {
      LocalSearchOptions o;
      o.seed = seed;
      o.workers = workers;
      return local_search_oracle(inst, o);
    }
  }
  return exhaustive(inst);
}

Schedule bench_schedule(const ScheduleDefaults& defaults, ProblemFamily family, SolverKind kind,
                        std::size_t n, std::size_t t_steps) {
  const ScheduleKind sk = kind == SolverKind::Pimi ? ScheduleKind::PimiBench : ScheduleKind::ConvBench;
  return make_schedule(sk, defaults.lookup(family, sk, n), t_steps);
}

CsvTable landscape_table(const CctsLandscape& land) {
  CsvTable t;
  t.header = {"t_steps", "p_mean", "p_logstd", "n_trials", "ccts"};
  for (const auto& pt : land.grid) {
    t.rows.push_back({std::to_string(pt.t_steps), format_number(pt.p_mean),
                      format_number(pt.p_logstd), format_optional(pt.n_trials),
                      format_optional(pt.ccts)});
  }
  return t;
}

CctsLandscape landscape_from_records(const std::vector<RecordLine>& lines,
                                     const GroundMap& ground, CostModel model,
                                     const std::vector<std::size_t>& grid,
                                     double threshold_fraction, double epsilon,
                                     bool integer_trials) {
  if (lines.empty()) throw_invalid("no trial records");
  const auto groups = group_records(lines);
  std::vector<std::vector<TrialRecord>> records;
  std::vector<SuccessCriterion> criteria;
  std::size_t t_steps = 0;
  std::size_t n = 0;
  for (const auto& [name, recs] : groups) {
    const auto g = ground.find(name);
    if (g == ground.end()) throw_invalid("no ground truth for instance '" + name + "'");
    criteria.push_back({g->second.energy, threshold_fraction});
    for (const auto& r : recs) {
      t_steps = std::max(t_steps, r.t_steps);
      n = std::max(n, r.final_spins.size());
    }
    records.push_back(recs);
  }
  std::vector<std::size_t> usable;
  for (auto t : grid) {
    if (t <= t_steps) usable.push_back(t);
  }
  return optimize_step_budget(success_curve(records, criteria, usable), model, n, epsilon,
                              integer_trials);
}

// ---------------------------------------------------------------------------
// Pipeline

namespace {

class Checkpoint {
 public:
  Checkpoint(const std::filesystem::path& dir, std::uint64_t manifest_hash, bool resume)
      : path_(dir / "checkpoint.txt") {
    const std::string head = "manifest " + hex64(manifest_hash);
    if (resume && std::filesystem::exists(path_)) {
      std::ifstream in(path_);
      std::string line;
      if (std::getline(in, line) && line == head) {
        while (std::getline(in, line)) {
          if (!line.empty()) done_.insert(line);
        }
        return;
      }
    }
    write_text(path_, head + "\n");
  }

  bool done(const std::string& stage) const { return done_.count(stage) > 0; }

  void mark(const std::string& stage) {
    std::ofstream out(path_, std::ios::app);
    out << stage << "\n";
    if (!out) throw_invalid("cannot update " + path_.string());
    done_.insert(stage);
  }

 private:
  std::filesystem::path path_;
  std::set<std::string> done_;
};

struct Runner {
  std::filesystem::path dir;
  Checkpoint cp;
  ArchiveSummary summary;

  template <class F>
  void stage(const std::string& name, F&& fn) {
    if (cp.done(name)) {
      summary.stages_skipped.push_back(name);
      return;
    }
    fn();
    cp.mark(name);
    summary.stages_run.push_back(name);
  }
};

std::vector<IsingInstance> load_instances(const std::vector<std::filesystem::path>& files) {
  std::vector<IsingInstance> out;
  out.reserve(files.size());
  for (const auto& f : files) out.push_back(read_instance(f).inst);
  return out;
}

std::vector<std::filesystem::path> instance_files(const std::filesystem::path& dir,
                                                  InstanceFamily family, std::size_t n,
                                                  std::size_t count) {
  std::vector<std::filesystem::path> out;
  for (std::size_t k = 0; k < count; ++k) out.push_back(dir / "instances" / instance_filename(family, n, k));
  return out;
}

void generate_set(const std::filesystem::path& dir, InstanceFamily family, std::size_t n,
                  std::size_t count, std::uint64_t seed, double edge_prob) {
  const auto files = instance_files(dir, family, n, count);
  for (std::size_t k = 0; k < count; ++k) {
    GeneratorSpec spec{family, n, instance_seed(seed, n, k), edge_prob};
    if (family == InstanceFamily::MaxCutER) {
      const auto mc = gen_maxcut(spec);
      write_instance(files[k], mc.ising, mc.edge_count);
    } else {
      write_instance(files[k], gen_sk1(spec));
    }
  }
}

void run_bench(Runner& r, const ExperimentManifest& m, const ScheduleDefaults& defaults,
               std::size_t workers) {
  const InstanceFamily fam = m.family == ExperimentFamily::MaxCutBench ? InstanceFamily::MaxCutER
                                                                      : InstanceFamily::SkOne;
  const ProblemFamily pfam = fam == InstanceFamily::MaxCutER ? ProblemFamily::MaxCut : ProblemFamily::Sk;
  for (std::size_t n : m.sizes) {
    const std::string tag = "n" + std::to_string(n);
    const auto files = instance_files(r.dir, fam, n, m.instances);
    const std::size_t t_steps = m.steps_per_spin * n;

    r.stage("generate_" + tag, [&] { generate_set(r.dir, fam, n, m.instances, m.seed, m.edge_prob); });

    const auto gs_path = r.dir / ("gs_" + tag + ".json");
    r.stage("oracle_" + tag, [&] {
      GroundMap ground;
      for (std::size_t k = 0; k < files.size(); ++k) {
        const auto inst = read_instance(files[k]).inst;
        const auto res = run_oracle(inst, m.oracle, instance_seed(m.seed, n, k), workers);
        ground[files[k].filename().string()] = ground_from(res);
      }
      write_ground(gs_path, ground);
    });

    for (SolverKind kind : m.solvers) {
      const std::string kname(to_string(kind));
      const auto rec_path = r.dir / ("records_" + kname + "_" + tag + ".jsonl");
      r.stage("solve_" + kname + "_" + tag, [&] {
        const auto insts = load_instances(files);
        BatchConfig cfg;
        cfg.kind = kind;
        cfg.n_trials = m.trials;
        cfg.base_seed = derive_seed(m.seed, static_cast<std::uint64_t>(kind) + 1, n);
        cfg.workers = workers;
        const auto sched = bench_schedule(defaults, pfam, kind, n, t_steps);
        const auto result = run_batch(insts, sched, cfg);
        std::ostringstream out;
        for (std::size_t i = 0; i < insts.size(); ++i) {
          std::vector<RecordLine> lines;
          for (std::size_t t = 0; t < result[i].size(); ++t) {
            lines.push_back({files[i].filename().string(), t, kname, result[i][t]});
          }
          write_records(out, lines);
        }
        write_text(rec_path, out.str());
      });

      r.stage("ccts_" + kname + "_" + tag, [&] {
        const auto land = landscape_from_records(read_records(rec_path), read_ground(gs_path),
                                                 cost_model_for(kind), default_grid(t_steps, m.grid_step),
                                                 m.threshold_fraction, m.epsilon);
        write_text(r.dir / ("landscape_" + kname + "_" + tag + ".csv"), landscape_table(land).str());
      });
    }
  }
}

void run_mimo(Runner& r, const ExperimentManifest& m, const ScheduleDefaults& defaults,
              std::size_t workers) {
  for (DetectorKind det : m.detectors) {
    const std::string dname(to_string(det));
    r.stage("ber_" + dname, [&] {
      BerConfig cfg;
      cfg.nt = m.nt;
      cfg.nr = m.nr;
      cfg.qam_order = m.qam;
      cfg.scenarios = m.scenarios;
      cfg.seed = m.seed;
      cfg.detector = det;
      cfg.trials = m.mimo_trials;
      cfg.steps = m.mimo_steps;
      cfg.workers = workers;
      if (det != DetectorKind::Mmse) {
        const std::size_t spins =
            2 * m.nt * static_cast<std::size_t>(correction_multiplicity(default_correction_set(m.qam)));
        const ScheduleKind sk = det == DetectorKind::Pimi ? ScheduleKind::PimiMimo : ScheduleKind::ConvMimo;
        cfg.params = defaults.lookup(ProblemFamily::Mimo, sk, spins);
      }
      CsvTable t;
      t.header = {"ebn0_db", "ber", "scenario_count", "detector"};
      for (double e : m.ebn0_db) {
        const BerPoint pt = ber(cfg, e);
        t.rows.push_back({format_number(e), format_number(pt.ber), std::to_string(pt.scenario_count), dname});
      }
      write_text(r.dir / ("ber_" + dname + ".csv"), t.str());
    });
  }
}

void run_flip_rate(Runner& r, const ExperimentManifest& m, const ScheduleDefaults& defaults,
                   std::size_t workers) {
  const InstanceFamily fam = parse_instance_family(m.flip_family);
  const ProblemFamily pfam = fam == InstanceFamily::MaxCutER ? ProblemFamily::MaxCut : ProblemFamily::Sk;
  const std::size_t n = m.sizes.front();
  const auto files = instance_files(r.dir, fam, n, 1);
  r.stage("generate", [&] { generate_set(r.dir, fam, n, 1, m.seed, m.edge_prob); });

  for (std::size_t k = 0; k < m.xis.size(); ++k) {
    const std::string tag = "xi" + std::to_string(k);
    const auto traj_path = r.dir / ("traj_" + tag + ".jsonl");
    r.stage("solve_" + tag, [&] {
      const auto inst = read_instance(files[0]).inst;
      BatchConfig cfg;
      cfg.kind = SolverKind::Pimi;
      cfg.n_trials = m.trials;
      cfg.base_seed = derive_seed(m.seed, 0xF11EULL, k);
      cfg.workers = workers;
      cfg.options.record_states = true;
      const auto sched =
          bench_schedule(defaults, pfam, SolverKind::Pimi, n, m.steps_per_spin * n).with_xi(m.xis[k]);
      const auto result = run_batch({inst}, sched, cfg);
      std::ostringstream out;
      std::vector<RecordLine> lines;
      for (std::size_t t = 0; t < result[0].size(); ++t) {
        lines.push_back({files[0].filename().string(), t, "pimi", result[0][t]});
      }
      write_records(out, lines);
      write_text(traj_path, out.str());
    });
    r.stage("flip_rate_" + tag, [&] {
      const auto inst = read_instance(files[0]).inst;
      std::vector<std::vector<SpinState>> trajectories;
      for (auto& line : read_records(traj_path)) {
        if (!line.record.state_trajectory) throw_invalid("trajectory file lacks state trajectories");
        trajectories.push_back(std::move(*line.record.state_trajectory));
      }
      const auto rate = neighbor_triggered_flip_rate(trajectories, inst);
      CsvTable t;
      t.header = {"step", "xi", "p_nt"};
      for (std::size_t s = 0; s < rate.size(); ++s) {
        t.rows.push_back({std::to_string(s), format_number(m.xis[k]), format_optional(rate[s])});
      }
      write_text(r.dir / ("pnt_" + tag + ".csv"), t.str());
    });
  }
}

}  // namespace

ArchiveSummary run_experiment(const ExperimentManifest& manifest,
                              const std::filesystem::path& out_dir, const RunOptions& options) {
  if (options.workers < 1) throw_invalid("worker count must be at least 1");
  std::filesystem::create_directories(out_dir);
  const ScheduleDefaults defaults = manifest.params == "builtin"
                                        ? ScheduleDefaults::builtin()
                                        : ScheduleDefaults::load(manifest.params);
  write_text(out_dir / "manifest.txt", manifest.canonical());
  Runner r{out_dir, Checkpoint(out_dir, manifest.hash(), options.resume), {}};
  r.summary.dir = out_dir;

  switch (manifest.family) {
    case ExperimentFamily::MaxCutBench:
    case ExperimentFamily::SkBench: run_bench(r, manifest, defaults, options.workers); break;
    case ExperimentFamily::MimoBer: run_mimo(r, manifest, defaults, options.workers); break;
    case ExperimentFamily::FlipRate: run_flip_rate(r, manifest, defaults, options.workers); break;
  }
  r.stage("report", [&] { write_report(summarize(out_dir), out_dir); });

  std::ostringstream stamp;
  stamp << "manifest_hash = " << hex64(manifest.hash()) << "\n";
  stamp << "manifest_schema = " << kManifestSchema << "\n";
  stamp << "params_version = " << defaults.version() << "\n";
  write_text(out_dir / "stamp.txt", stamp.str());
  return r.summary;
}

// ---------------------------------------------------------------------------
// Report

namespace {

std::optional<double> parse_cell(const std::string& s) {
  if (s == "null" || s.empty()) return std::nullopt;
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) throw_invalid("bad number '" + s + "' in archive CSV");
  return v;
}

struct BenchRow {
  std::size_t n = 0;
  std::string solver;
  CctsLandscape land;
};

std::vector<std::filesystem::path> sorted_files(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> out;
  if (!std::filesystem::is_directory(dir)) return out;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (e.is_regular_file()) out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

Report summarize(const std::filesystem::path& archive) {
  Report rep;
  const auto files = sorted_files(archive);
  const std::regex land_re(R"(landscape_([a-z-]+)_n(\d+)\.csv)");
  const std::regex ber_re(R"(ber_([a-z-]+)\.csv)");
  const std::regex pnt_re(R"(pnt_xi(\d+)\.csv)");
  const std::regex gs_re(R"(gs_n\d+\.json)");

  std::vector<BenchRow> bench;
  std::vector<std::vector<std::string>> ber_rows;
  std::vector<std::vector<std::string>> pnt_rows;
  std::set<std::string> grounded;
  for (const auto& f : files) {
    const std::string name = f.filename().string();
    std::smatch mt;
    if (std::regex_match(name, mt, land_re)) {
      BenchRow row;
      row.solver = mt[1];
      row.n = std::stoul(mt[2]);
      const CsvTable t = read_csv(f);
      std::vector<LandscapePoint> pts;
      for (const auto& cells : t.rows) {
        if (cells.size() < 5) throw_invalid(name + ": short landscape row");
        LandscapePoint pt;
        pt.t_steps = static_cast<std::size_t>(parse_cell(cells[0]).value_or(0.0));
        pt.p_mean = parse_cell(cells[1]).value_or(0.0);
        pt.p_logstd = parse_cell(cells[2]).value_or(0.0);
        pt.n_trials = parse_cell(cells[3]);
        pt.ccts = parse_cell(cells[4]);
        pts.push_back(pt);
      }
      row.land.n = row.n;
      row.land.grid = std::move(pts);
      for (std::size_t k = 0; k < row.land.grid.size(); ++k) {
        const auto& c = row.land.grid[k].ccts;
        if (!c) continue;
        if (!row.land.optimum || *c < *row.land.grid[*row.land.optimum].ccts) row.land.optimum = k;
      }
      bench.push_back(std::move(row));
    } else if (std::regex_match(name, mt, ber_re)) {
      for (auto& cells : read_csv(f).rows) {
        if (cells.size() < 4) throw_invalid(name + ": short BER row");
        ber_rows.push_back({cells[3], cells[0], cells[1], cells[2]});
      }
    } else if (std::regex_match(name, mt, pnt_re)) {
      std::vector<std::optional<double>> rate;
      std::string xi = "null";
      for (const auto& cells : read_csv(f).rows) {
        if (cells.size() < 3) throw_invalid(name + ": short flip-rate row");
        xi = cells[1];
        rate.push_back(parse_cell(cells[2]));
      }
      std::size_t defined = 0;
      for (const auto& v : rate) defined += v ? 1 : 0;
      pnt_rows.push_back({xi, format_optional(mean_defined(rate)), std::to_string(defined),
                          std::to_string(rate.size())});
    } else if (std::regex_match(name, gs_re)) {
      for (const auto& [inst, g] : read_ground(f)) grounded.insert(inst);
    }
  }

  // Missing ground truth only matters where benchmark instances exist.
  if (!bench.empty() || !grounded.empty()) {
    for (const auto& f : sorted_files(archive / "instances")) {
      if (f.extension() == ".json" && !grounded.count(f.filename().string())) {
        rep.missing_ground.push_back(f.filename().string());
      }
    }
  }

  std::ostringstream text;
  if (!bench.empty()) {
    std::sort(bench.begin(), bench.end(), [](const BenchRow& a, const BenchRow& b) {
      return a.n != b.n ? a.n < b.n : a.solver < b.solver;
    });
    rep.table.header = {"n", "solver", "t_opt", "ccts_opt", "p_at_opt", "p_final", "speedup_vs_pimi"};
    for (const auto& row : bench) {
      std::optional<double> pimi_ccts;
      for (const auto& other : bench) {
        if (other.n == row.n && other.solver == "pimi" && other.land.solved()) {
          pimi_ccts = *other.land.best().ccts;
        }
      }
      const double p_final = row.land.grid.empty() ? 0.0 : row.land.grid.back().p_mean;
      std::vector<std::string> cells{std::to_string(row.n), row.solver};
      if (row.land.solved()) {
        const auto& b = row.land.best();
        cells.push_back(std::to_string(b.t_steps));
        cells.push_back(format_number(*b.ccts));
        cells.push_back(format_number(b.p_mean));
      } else {
        cells.insert(cells.end(), {"null", "null", "null"});
      }
      cells.push_back(format_number(p_final));
      if (row.land.solved() && pimi_ccts) {
        cells.push_back(format_number(speedup(*row.land.best().ccts, *pimi_ccts)));
      } else {
        cells.push_back("null");
      }
      text << "N=" << cells[0] << " " << row.solver << ": T*=" << cells[2] << " CCTS*=" << cells[3]
           << " p(T*)=" << cells[4] << " p(T_max)=" << cells[5] << " speedup=" << cells[6] << "\n";
      rep.table.rows.push_back(std::move(cells));
    }
  } else if (!ber_rows.empty()) {
    rep.table.header = {"detector", "ebn0_db", "ber", "scenario_count"};
    rep.table.rows = ber_rows;
    for (const auto& r : ber_rows) {
      text << r[0] << " @ " << r[1] << " dB: BER=" << r[2] << " over " << r[3] << " scenarios\n";
    }
  } else if (!pnt_rows.empty()) {
    rep.table.header = {"xi", "mean_p_nt", "defined_steps", "steps"};
    rep.table.rows = pnt_rows;
    for (const auto& r : pnt_rows) {
      text << "xi=" << r[0] << ": mean P_NT=" << r[1] << " (" << r[2] << "/" << r[3] << " steps defined)\n";
    }
  }
  for (const auto& name : rep.missing_ground) text << "missing ground truth: " << name << "\n";
  rep.text = text.str();
  return rep;
}

void write_report(const Report& report, const std::filesystem::path& out_dir) {
  write_text(out_dir / "report.csv", report.empty() ? std::string() : report.table.str());
  write_text(out_dir / "report.txt", report.text);
}

}  // namespace pimi
