#include <doctest.h>

#include <cmath>

#include "pimi/metrics.hpp"
#include "support.hpp"

using namespace pimi;

namespace {

TrialRecord record_with(std::vector<std::pair<std::size_t, double>> imp, std::size_t t_steps) {
  TrialRecord r;
  r.improvements = std::move(imp);
  r.best_energy = r.improvements.back().second;
  r.best_step = r.improvements.back().first;
  r.t_steps = t_steps;
  return r;
}

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("success threshold and probability") {
  const SuccessCriterion c{-100.0, 0.999};
  CHECK(c.threshold() == doctest::Approx(-99.9));
  std::vector<TrialRecord> all(5, record_with({{0, -100.0}}, 10));
  CHECK(success_probability(all, c) == 1.0);
  std::vector<TrialRecord> mixed{record_with({{0, -50.0}, {7, -100.0}}, 10),
                                 record_with({{0, -99.95}}, 10),
                                 record_with({{0, -10.0}}, 10),
                                 record_with({{0, -60.0}, {3, -99.0}}, 10)};
  CHECK(success_probability(mixed, c) == 0.5);
  CHECK(success_probability(mixed, c, 7) == 0.25);
  CHECK(success_probability(mixed, c, 8) == 0.5);
}

TEST_CASE("trial counts") {
  CHECK(*n_trials_required(0.5) == 10.0);
  CHECK(*n_trials_required(1.0) == 1.0);
  CHECK(*n_trials_required(0.999) == 1.0);
  CHECK_FALSE(n_trials_required(0.0).has_value());
  CHECK(*n_trials_required(0.5, 1e-3, false) == doctest::Approx(std::log(1e-3) / std::log(0.5)));
  double prev = INFINITY;
  for (int k = 1; k <= 1000; ++k) {
    const double v = *n_trials_required(k / 1000.0);
    CHECK(v <= prev);
    prev = v;
  }
}

TEST_CASE("cost models") {
  CHECK(std::abs(clock_cycles_per_step(CostModel::Pimi, 200) - 17.01) <= 0.01);
  CHECK(std::abs(clock_cycles_per_step(CostModel::Par, 200) - 15.41) <= 0.01);
  CHECK(clock_cycles_per_sweep(CostModel::Seq, 4) == doctest::Approx(44.67));
  CHECK(clock_cycles_per_step(CostModel::Seq, 4) == doctest::Approx(44.67 / 4));
  CHECK(clock_cycles_per_sweep(CostModel::Pimi, 64) == clock_cycles_per_step(CostModel::Pimi, 64));
  for (std::size_t n = 64; n <= 4096; n *= 2) {
    CHECK(clock_cycles_per_sweep(CostModel::Seq, n) / clock_cycles_per_step(CostModel::Pimi, n) >
          n / 2.0);
  }
}

TEST_CASE("CCTS arithmetic") {
  CHECK(std::abs(*ccts(1.0, 100, CostModel::Pimi, 200) - 1701.0) <= 0.5);
  CHECK_FALSE(ccts(0.0, 100, CostModel::Pimi, 200).has_value());
  CHECK(*ccts(0.5, 10, CostModel::Par, 16) == doctest::Approx(10 * 10 * (1.1 * 4 + 7)));
  CHECK(speedup(5.0, 5.0) == 1.0);
  CHECK(speedup(100.0, 4.0) == 25.0);
  CHECK(wall_clock(2.74e8, kFclkPimiMimo8x8Hz) == doctest::Approx(1.0));
  CHECK(wall_clock(0.0, 1e8) == 0.0);
}

TEST_CASE("grids") {
  CHECK(parse_grid("10:50:20") == std::vector<std::size_t>{10, 30, 50});
  CHECK(parse_grid("5:5:1") == std::vector<std::size_t>{5});
  CHECK_THROWS(parse_grid("10:5:1"));
  CHECK_THROWS(parse_grid("0:5:1"));
  CHECK_THROWS(parse_grid("a:b"));
  CHECK(default_grid(40) == std::vector<std::size_t>{10, 20, 30, 40});
}

TEST_CASE("landscape optimum on a closed-form curve") {
  // p(T) = min(1, T / 100): scan the closed form directly as the oracle.
  std::vector<LandscapePoint> pts;
  double best = INFINITY;
  std::size_t best_t = 0;
  for (std::size_t t = 10; t <= 300; t += 10) {
    const double p = std::min(1.0, t / 100.0);
    pts.push_back({t, p, 0.0, {}, {}});
    const double trials = p >= 1.0 ? 1.0 : std::ceil(std::log(1e-3) / std::log(1.0 - p));
    const double cc = trials * t * (1.1 * std::log2(50.0) + 8.6);
    if (cc < best) {
      best = cc;
      best_t = t;
    }
  }
  const auto land = optimize_step_budget(pts, CostModel::Pimi, 50);
  REQUIRE(land.solved());
  CHECK(land.best().t_steps == best_t);
  CHECK(*land.best().ccts == doctest::Approx(best));
  CHECK(best_t > 10);
  CHECK(best_t < 300);
  for (const auto& pt : land.grid) CHECK(*land.best().ccts <= *pt.ccts);
}

TEST_CASE("landscape edge cases") {
  std::vector<LandscapePoint> sure{{10, 1.0, 0, {}, {}}, {20, 1.0, 0, {}, {}}, {30, 1.0, 0, {}, {}}};
  CHECK(optimize_step_budget(sure, CostModel::Pimi, 20).best().t_steps == 10);
  std::vector<LandscapePoint> none{{10, 0.0, 0, {}, {}}, {20, 0.0, 0, {}, {}}};
  const auto land = optimize_step_budget(none, CostModel::Par, 20);
  CHECK_FALSE(land.solved());
  CHECK_THROWS_AS(land.best(), Error);
  try {
    land.best();
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Unsolved);
  }
  CHECK_THROWS(optimize_step_budget({{10, 1.0, 0, {}, {}}}, CostModel::Pimi, 20));
}

TEST_CASE("success curve averages instances first") {
  const std::vector<std::vector<TrialRecord>> recs{
      {record_with({{0, -1.0}, {4, -2.0}}, 10), record_with({{0, -2.0}}, 10)},
      {record_with({{0, -5.0}, {8, -10.0}}, 10), record_with({{0, -3.0}}, 10)}};
  const std::vector<SuccessCriterion> crit{{-2.0, 1.0}, {-10.0, 1.0}};
  const auto curve = success_curve(recs, crit, {1, 5, 9, 10});
  CHECK(curve[0].p_mean == doctest::Approx(0.25));  // 0.5 and 0
  CHECK(curve[1].p_mean == doctest::Approx(0.5));   // 1 and 0
  CHECK(curve[2].p_mean == doctest::Approx(0.75));  // 1 and 0.5
  CHECK(curve[3].p_mean == doctest::Approx(0.75));
  CHECK(curve[2].p_logstd == doctest::Approx(std::log10(2.0) / std::sqrt(2.0)));
  for (std::size_t k = 1; k < curve.size(); ++k) CHECK(curve[k].p_mean >= curve[k - 1].p_mean);
}

TEST_CASE("log statistics") {
  const auto st = log10_stats({1.0, 100.0, 0.0});
  CHECK(st.count == 2);
  CHECK(st.mean == doctest::Approx(1.0));
  CHECK(st.std == doctest::Approx(std::sqrt(2.0)));  // sample deviation
}

TEST_CASE("neighbour-triggered flip rate") {
  const auto ferro = testing::pair(1.0);
  const std::vector<std::vector<SpinState>> frozen{
      std::vector<SpinState>(5, SpinState::from_string("+-"))};
  for (const auto& v : neighbor_triggered_flip_rate(frozen, ferro)) CHECK_FALSE(v.has_value());
  CHECK_FALSE(mean_defined(neighbor_triggered_flip_rate(frozen, ferro)).has_value());

  std::vector<SpinState> orbit;
  for (int t = 0; t < 6; ++t) orbit.push_back(SpinState::from_string(t % 2 ? "-+" : "+-"));
  const auto rate = neighbor_triggered_flip_rate({orbit, orbit}, ferro);
  REQUIRE(rate.size() == 5);
  for (const auto& v : rate) CHECK(*v == 1.0);

  // Spin 0 flips alone: spin 1 sees a neighbour flip but stays, spin 0 has none.
  const std::vector<std::vector<SpinState>> lone{
      {SpinState::from_string("++"), SpinState::from_string("-+")}};
  CHECK(*neighbor_triggered_flip_rate(lone, ferro)[0] == 0.0);
  // Uncoupled spins never condition each other.
  const auto free2 = IsingInstance::zeros(2);
  CHECK_FALSE(neighbor_triggered_flip_rate({orbit}, free2)[0].has_value());
  CHECK(*mean_defined({std::nullopt, 0.5, 1.0}) == 0.75);
}

}  // TEST_SUITE
