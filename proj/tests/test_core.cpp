#include <doctest.h>

#include "pimi/core.hpp"
#include "support.hpp"

using namespace pimi;

namespace {

// Double loop over i < j, written independently of the library.
double energy_oracle(const IsingInstance& inst, const SpinState& s) {
  double e = 0.0;
  for (std::size_t i = 0; i < inst.size(); ++i) {
    for (std::size_t k = i + 1; k < inst.size(); ++k) e -= inst.j(i, k) * s[i] * s[k];
    e -= inst.h()[i] * s[i];
  }
  return e;
}

std::vector<double> field_oracle(const IsingInstance& inst, const SpinState& s) {
  std::vector<double> f(inst.size());
  for (std::size_t i = 0; i < inst.size(); ++i) {
    double acc = 0.0;
    for (std::size_t k = 0; k < inst.size(); ++k) acc += inst.j(i, k) * s[k];
    f[i] = acc + inst.h()[i];
  }
  return f;
}

}  // namespace

TEST_SUITE("core") {

TEST_CASE("K3 energy, fields and cut") {
  const auto inst = testing::k3();
  const auto s = SpinState::from_string("++-");
  CHECK(energy(inst, s) == -1.0);
  CHECK(cut_value(inst, s, 3) == 2);

  // -1 is the minimum over all 8 states.
  double best = 1e9;
  for (int m = 0; m < 8; ++m) {
    std::vector<double> v{m & 1 ? -1.0 : 1.0, m & 2 ? -1.0 : 1.0, m & 4 ? -1.0 : 1.0};
    best = std::min(best, energy(inst, SpinState(v)));
  }
  CHECK(best == -1.0);

  const auto f = local_fields(inst, SpinState::uniform(3));
  CHECK(f == std::vector<double>{-2.0, -2.0, -2.0});
  CHECK(cut_value(inst, SpinState::uniform(3), 3) == 0);
}

TEST_CASE("single spin bias and path cut") {
  IsingInstance one(1, {0.0}, {2.5});
  CHECK(energy(one, SpinState::uniform(1)) == -2.5);

  auto path = IsingInstance::zeros(3);
  path.set_coupling(0, 1, -1.0);
  path.set_coupling(1, 2, -1.0);
  CHECK(cut_value(path, SpinState::from_string("+-+"), 2) == 2);
}

TEST_CASE("non-integer cut is rejected") {
  auto inst = IsingInstance::zeros(2);
  inst.set_coupling(0, 1, -0.5);
  CHECK_THROWS_AS(cut_value(inst, SpinState::from_string("+-"), 1), Error);
}

TEST_CASE("dimension mismatch is an error") {
  CHECK_THROWS_AS(energy(testing::k3(), SpinState::uniform(2)), Error);
  CHECK_THROWS_AS(local_fields(testing::k3(), SpinState::uniform(4)), Error);
}

TEST_CASE("energy and fields match double-loop oracles") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const std::size_t n = 2 + seed % 30;
    const auto inst = testing::random_instance(n, seed);
    const auto s = SpinState::random(n, seed * 7);
    CHECK(testing::rel_diff(energy(inst, s), energy_oracle(inst, s)) < 1e-12);
    const auto f = local_fields(inst, s);
    const auto g = field_oracle(inst, s);
    for (std::size_t i = 0; i < n; ++i) CHECK(f[i] == doctest::Approx(g[i]).epsilon(1e-12));
  }
  // N = 6 with exact equality: row sums in the same order.
  const auto inst = testing::random_instance(6, 99);
  const auto s = SpinState::random(6, 5);
  CHECK(local_fields(inst, s) == field_oracle(inst, s));
}

TEST_CASE("single flip changes energy by 2 s_k I_k") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const std::size_t n = 3 + seed * 3;
    const auto inst = testing::random_instance(n, seed + 100);
    auto s = SpinState::random(n, seed);
    const auto f = local_fields(inst, s);
    const double e0 = energy(inst, s);
    for (std::size_t k = 0; k < n; ++k) {
      auto t = s;
      t.flip(k);
      CHECK(energy(inst, t) - e0 == doctest::Approx(2.0 * s[k] * f[k]).epsilon(1e-10));
    }
  }
}

TEST_CASE("global flip symmetry with h = 0") {
  const auto inst = testing::random_instance(17, 3, false);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto s = SpinState::random(17, seed);
    CHECK(energy(inst, s) == energy(inst, s.negated()));
  }
}

TEST_CASE("quadratic form agrees with the i<j form up to N = 256") {
  const auto inst = testing::random_instance(256, 11);
  const auto s = SpinState::random(256, 12);
  double quad = 0.0;
  for (std::size_t i = 0; i < 256; ++i) {
    for (std::size_t k = 0; k < 256; ++k) quad += inst.j(i, k) * s[i] * s[k];
  }
  double lin = 0.0;
  for (std::size_t i = 0; i < 256; ++i) lin += inst.h()[i] * s[i];
  CHECK(testing::rel_diff(energy(inst, s), -lin - 0.5 * quad) <= 1e-12);
}

TEST_CASE("instance invariants") {
  CHECK_THROWS_AS(IsingInstance(2, {0.0, 1.0, 2.0, 0.0}, {0.0, 0.0}), Error);  // asymmetric
  CHECK_THROWS_AS(IsingInstance(2, {1.0, 0.0, 0.0, 0.0}, {0.0, 0.0}), Error);  // diagonal
  CHECK_THROWS_AS(IsingInstance(2, {0.0, 0.0, 0.0}, {0.0, 0.0}), Error);       // shape
  auto inst = IsingInstance::zeros(3);
  CHECK_THROWS_AS(inst.set_coupling(1, 1, 1.0), Error);
  CHECK_THROWS_AS(SpinState(std::vector<double>{1.0, 0.0}), Error);
  CHECK_THROWS_AS(SpinState::from_string("+x-"), Error);
}

TEST_CASE("spin strings round trip") {
  const auto s = SpinState::random(40, 4);
  CHECK(SpinState::from_string(s.to_string()) == s);
  CHECK(SpinState::from_string("+-").values()[1] == -1.0);
}

TEST_CASE("best_within reads the improvement list") {
  TrialRecord r;
  r.improvements = {{0, -1.0}, {5, -3.0}, {9, -4.0}};
  CHECK(r.best_within(1) == -1.0);
  CHECK(r.best_within(6) == -3.0);
  CHECK(r.best_within(9) == -3.0);
  CHECK(r.best_within(10) == -4.0);
}

}  // TEST_SUITE
