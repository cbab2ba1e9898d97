#include <doctest.h>

#include <cmath>

#include "pimi/instances.hpp"
#include "pimi/io.hpp"

using namespace pimi;

TEST_SUITE("instances") {

TEST_CASE("complete graph limit gives K3") {
  const auto mc = gen_maxcut({InstanceFamily::MaxCutER, 3, 7, 1.0});
  CHECK(mc.edge_count == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t k = 0; k < 3; ++k) CHECK(mc.ising.j(i, k) == (i == k ? 0.0 : -1.0));
  }
  CHECK(mc.ising.coupling_scale() == doctest::Approx(2.0 / std::sqrt(3.0)));
}

TEST_CASE("Erdos-Renyi edge count statistics") {
  const auto mc = gen_maxcut({InstanceFamily::MaxCutER, 100, 11, 0.5});
  // Binomial(4950, 0.5): mean 2475, sigma ~ 35.2.
  CHECK(std::abs(mc.edge_count - 2475.0) <= 3.0 * std::sqrt(4950 * 0.25));
  long long counted = 0;
  for (std::size_t i = 0; i < 100; ++i) {
    for (std::size_t k = i + 1; k < 100; ++k) counted += mc.ising.j(i, k) == -1.0;
  }
  CHECK(counted == mc.edge_count);
}

TEST_CASE("entry alphabets, symmetry and zero diagonal") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto mc = gen_maxcut({InstanceFamily::MaxCutER, 30, seed, 0.5}).ising;
    const auto sk = gen_sk1({InstanceFamily::SkOne, 30, seed, 0.5});
    for (std::size_t i = 0; i < 30; ++i) {
      CHECK(mc.h()[i] == 0.0);
      CHECK(sk.h()[i] == 0.0);
      for (std::size_t k = 0; k < 30; ++k) {
        CHECK(mc.j(i, k) == mc.j(k, i));
        CHECK(sk.j(i, k) == sk.j(k, i));
        if (i == k) {
          CHECK(mc.j(i, k) == 0.0);
          CHECK(sk.j(i, k) == 0.0);
        } else {
          CHECK((mc.j(i, k) == 0.0 || mc.j(i, k) == -1.0));
          CHECK(std::abs(sk.j(i, k)) == 1.0);
        }
      }
    }
    CHECK(sk.coupling_scale() == doctest::Approx(1.0 / std::sqrt(30.0)));
  }
}

TEST_CASE("two-spin SK ground energy is -1") {
  const auto sk = gen_sk1({InstanceFamily::SkOne, 2, 3, 0.5});
  double best = INFINITY;
  for (const char* s : {"++", "+-", "-+", "--"}) best = std::min(best, energy(sk, SpinState::from_string(s)));
  CHECK(best == -1.0);
}

TEST_CASE("SK couplings have mean near zero") {
  const auto sk = gen_sk1({InstanceFamily::SkOne, 10, 42, 0.5});
  double sum = 0.0;
  for (std::size_t i = 0; i < 10; ++i) {
    for (std::size_t k = i + 1; k < 10; ++k) sum += sk.j(i, k);
  }
  CHECK(std::abs(sum / 45.0) <= 3.0 / std::sqrt(45.0));
}

TEST_CASE("same generator settings give byte-identical instance files") {
  const GeneratorSpec spec{InstanceFamily::MaxCutER, 40, 9, 0.5};
  const auto a = gen_maxcut(spec);
  const auto b = gen_maxcut(spec);
  CHECK(instance_json(a.ising, a.edge_count) == instance_json(b.ising, b.edge_count));
  const auto other = gen_maxcut({InstanceFamily::MaxCutER, 40, 10, 0.5});
  CHECK(instance_json(a.ising, a.edge_count) != instance_json(other.ising, other.edge_count));
  CHECK(instance_filename(InstanceFamily::SkOne, 50, 3) == "sk1_n50_i3.json");
  CHECK(instance_seed(1, 20, 0) != instance_seed(1, 20, 1));
}

TEST_CASE("bad generator specs") {
  CHECK_THROWS(gen_maxcut({InstanceFamily::MaxCutER, 10, 1, 1.5}));
  CHECK_THROWS(gen_maxcut({InstanceFamily::MaxCutER, 0, 1, 0.5}));
  CHECK_THROWS(parse_instance_family("torus"));
}

}  // TEST_SUITE
