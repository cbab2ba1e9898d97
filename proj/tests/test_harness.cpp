#include <doctest.h>

#include <fstream>

#include "pimi/harness.hpp"
#include "support.hpp"

using namespace pimi;

namespace {

std::map<std::string, std::string> read_tree(const std::filesystem::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : std::filesystem::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) out[std::filesystem::relative(e.path(), dir).string()] = read_text(e.path());
  }
  return out;
}

const char* kSmallBench =
    "schema = 1\nfamily = maxcut-bench\nseed = 3\nsizes = 8\ninstances = 3\ntrials = 16\n"
    "steps_per_spin = 10\nsolvers = pimi,conv-par\ngrid_step = 10\n";

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("manifest parsing") {
  const auto m = ExperimentManifest::parse(kSmallBench);
  CHECK(m.family == ExperimentFamily::MaxCutBench);
  CHECK(m.sizes == std::vector<std::size_t>{8});
  CHECK(m.solvers.size() == 2);
  CHECK(ExperimentManifest::parse(m.canonical()).canonical() == m.canonical());
  CHECK(ExperimentManifest::parse(m.canonical()).hash() == m.hash());
  auto m2 = m;
  m2.seed = 4;
  CHECK(m2.hash() != m.hash());
  CHECK_THROWS(ExperimentManifest::parse("schema = 1\nfamily = maxcut-bench\ntrails = 3\n"));
  CHECK_THROWS(ExperimentManifest::parse("schema = 2\nfamily = maxcut-bench\n"));
  CHECK_THROWS(ExperimentManifest::parse("schema = 1\nseed = 1\nseed = 2\n"));
  CHECK_THROWS(ExperimentManifest::parse("schema = 1\nfamily = qubo\n"));
  CHECK(hex64(fnv1a64("")) == "cbf29ce484222325");
}

TEST_CASE("shipped manifests parse") {
  for (const char* f : {"maxcut_bench.conf", "sk_bench.conf", "mimo_ber.conf", "flip_rate.conf"}) {
    CHECK_NOTHROW(ExperimentManifest::load(std::filesystem::path(PIMI_SOURCE_DIR) / "manifests" / f));
  }
}

TEST_CASE("bench pipeline, resume and report") {
  const auto dir = testing::scratch_dir("harness_bench");
  const auto m = ExperimentManifest::parse(kSmallBench);
  const auto first = run_experiment(m, dir / "a");
  CHECK(first.stages_skipped.empty());
  CHECK(std::filesystem::exists(dir / "a" / "landscape_pimi_n8.csv"));
  CHECK(std::filesystem::exists(dir / "a" / "landscape_conv-par_n8.csv"));
  CHECK(std::filesystem::exists(dir / "a" / "stamp.txt"));
  const auto tree = read_tree(dir / "a");

  const auto again = run_experiment(m, dir / "a");
  CHECK(again.stages_run.empty());
  CHECK(again.stages_skipped.size() == first.stages_run.size());
  CHECK(read_tree(dir / "a") == tree);

  // Separate directory with more workers gives the same bytes.
  run_experiment(m, dir / "b", {.workers = 4, .resume = true});
  CHECK(read_tree(dir / "b") == tree);

  // A partial checkpoint resumes after the recorded stages.
  std::ifstream in(dir / "a" / "checkpoint.txt");
  std::string head, stage;
  std::getline(in, head);
  std::getline(in, stage);
  write_text(dir / "a" / "checkpoint.txt", head + "\n" + stage + "\n");
  const auto resumed = run_experiment(m, dir / "a");
  CHECK(resumed.stages_skipped.size() == 1);
  CHECK(read_tree(dir / "a") == tree);

  const auto report = summarize(dir / "a");
  CHECK_FALSE(report.empty());
  const auto& h = report.table.header;
  CHECK(std::find(h.begin(), h.end(), "speedup_vs_pimi") != h.end());
  CHECK(report.table.rows.size() == 2);
  CHECK(report.missing_ground.empty());
}

TEST_CASE("changed manifest does not reuse a checkpoint") {
  const auto dir = testing::scratch_dir("harness_change");
  auto m = ExperimentManifest::parse(kSmallBench);
  run_experiment(m, dir);
  m.trials = 8;
  const auto s = run_experiment(m, dir);
  CHECK(s.stages_skipped.empty());
}

TEST_CASE("empty archive gives an empty report") {
  const auto dir = testing::scratch_dir("harness_empty");
  const auto r = summarize(dir);
  CHECK(r.empty());
  CHECK_NOTHROW(write_report(r, dir));
}

TEST_CASE("mimo and flip-rate pipelines") {
  const auto dir = testing::scratch_dir("harness_other");
  const auto mimo = ExperimentManifest::parse(
      "schema = 1\nfamily = mimo-ber\nseed = 2\nnt = 2\nnr = 2\nqam = 4\nebn0_db = 0,10\n"
      "scenarios = 100\ndetectors = mmse,pimi\nmimo_trials = 4\nmimo_steps = 8\n");
  run_experiment(mimo, dir / "mimo");
  const auto ber = read_csv(dir / "mimo" / "ber_pimi.csv");
  CHECK(ber.header == std::vector<std::string>{"ebn0_db", "ber", "scenario_count", "detector"});
  CHECK(ber.rows.size() == 2);
  CHECK(summarize(dir / "mimo").table.rows.size() == 4);

  const auto flip = ExperimentManifest::parse(
      "schema = 1\nfamily = flip-rate\nseed = 2\nsizes = 12\ntrials = 4\nsteps_per_spin = 5\n"
      "xis = 0,0.9\nflip_family = sk1\n");
  run_experiment(flip, dir / "flip");
  CHECK(std::filesystem::exists(dir / "flip" / "pnt_xi0.csv"));
  CHECK(summarize(dir / "flip").table.rows.size() == 2);
}

TEST_CASE("oracle selection and cost models") {
  CHECK(run_oracle(testing::k3(), "auto", 1, 1).method == OracleMethod::Exhaustive);
  CHECK(run_oracle(IsingInstance::zeros(30), "auto", 1, 1).method == OracleMethod::SimAnneal);
  CHECK_THROWS(run_oracle(testing::k3(), "guess", 1, 1));
  CHECK(cost_model_for(SolverKind::ConvSequential) == CostModel::Seq);
  CHECK(cost_model_for(SolverKind::ConvParallel) == CostModel::Par);
  CHECK(cost_model_for(SolverKind::Pimi) == CostModel::Pimi);
}

}  // TEST_SUITE
