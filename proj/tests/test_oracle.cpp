#include <doctest.h>

#include <cmath>

#include "pimi/instances.hpp"
#include "pimi/oracle.hpp"
#include "support.hpp"

using namespace pimi;

TEST_SUITE("oracle") {

TEST_CASE("small exact cases") {
  CHECK(exhaustive(testing::k3()).best_energy == -1.0);
  const auto r = exhaustive(testing::pair(1.0));
  CHECK(r.best_energy == -1.0);
  CHECK(r.best_state == SpinState::from_string("++"));
  CHECK(r.method == OracleMethod::Exhaustive);
  CHECK(r.effort.per_restart == 2);  // s_0 fixed
  CHECK_THROWS_AS(exhaustive(IsingInstance::zeros(25)), Error);
}

TEST_CASE("exhaustive reports a state with the reported energy") {
  const auto inst = testing::random_instance(13, 5);
  const auto r = exhaustive(inst);
  CHECK(energy(inst, r.best_state) == doctest::Approx(r.best_energy).epsilon(1e-12));
}

TEST_CASE("annealing stage count") {
  CHECK(sa_stage_count(5.0, 0.01, 0.995) == 1240);
  CHECK(std::ceil(std::log(0.002) / std::log(0.995)) == 1240.0);
  CHECK(default_flips_per_temperature(50) == 500);
  CHECK(default_flips_per_temperature(100) == 10000);
  CHECK(default_flips_per_temperature(150) == 20000);
  CHECK(default_flips_per_temperature(200) == 50000);
}

TEST_CASE("local search on K3 from any seed") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    LocalSearchOptions opt;
    opt.seed = seed;
    opt.restarts = 1;
    opt.cycles = 5;
    CHECK(local_search_oracle(testing::k3(), opt).best_energy == -1.0);
  }
}

TEST_CASE("heuristics never beat exhaustive and match it at N = 16") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto inst = gen_sk1({InstanceFamily::SkOne, 16, seed, 0.5});
    const double exact = exhaustive(inst).best_energy;
    SimAnnealOptions sa;
    sa.seed = seed;
    sa.restarts = 2;
    const auto rs = sim_anneal_oracle(inst, sa);
    LocalSearchOptions ls;
    ls.seed = seed;
    const auto rl = local_search_oracle(inst, ls);
    CHECK(rs.best_energy >= exact);
    CHECK(rl.best_energy >= exact);
    CHECK(rs.best_energy == exact);
    CHECK(rl.best_energy == exact);
    CHECK(energy(inst, rs.best_state) == rs.best_energy);
  }
}

TEST_CASE("oracles ignore the normalization metadata") {
  auto inst = gen_maxcut({InstanceFamily::MaxCutER, 14, 2, 0.5}).ising;
  const double a = exhaustive(inst).best_energy;
  LocalSearchOptions ls;
  const double la = local_search_oracle(inst, ls).best_energy;
  inst.set_coupling_scale(1.0);
  CHECK(exhaustive(inst).best_energy == a);
  CHECK(local_search_oracle(inst, ls).best_energy == la);
}

TEST_CASE("heuristic oracles are deterministic across worker counts") {
  const auto inst = gen_sk1({InstanceFamily::SkOne, 30, 1, 0.5});
  SimAnnealOptions sa;
  sa.restarts = 4;
  sa.flips_per_temp = 30;
  sa.workers = 1;
  const auto a = sim_anneal_oracle(inst, sa);
  sa.workers = 4;
  const auto b = sim_anneal_oracle(inst, sa);
  CHECK(a.best_energy == b.best_energy);
  CHECK(a.best_state == b.best_state);
  CHECK(a.effort.stages == 1240);
  CHECK(parse_oracle_method("bls") == OracleMethod::LocalSearch);
}

}  // TEST_SUITE
