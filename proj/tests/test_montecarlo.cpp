#include <doctest.h>

#include <cmath>

#include "metachain/errors.hpp"
#include "metachain/montecarlo.hpp"
#include "support/fixtures.hpp"

using namespace metachain;
using namespace testing_support;

TEST_SUITE("mc_validation") {
  TEST_CASE("evaluation") {
    CHECK(evaluate(sq(1, 2), 1e-2) == doctest::Approx(1e-4).epsilon(1e-12));
    CHECK(evaluate(sq(1, 2, 1, 1), 1e-1) == doctest::Approx(0.05).epsilon(1e-12));
    CHECK_THROWS_AS(evaluate(sq(1, 600), 1e-2), Error);
  }

  TEST_CASE("two-state exit is exponential with mean 1/r") {
    ModelSpec s;
    s.scales = {{"eps", Rational(1)}};
    s.states = {"a", "b"};
    s.edges = {{"a", "b", Rational(1, 4), Rational(0), {}}, {"b", "a", Rational(1), Rational(0), {}}};
    const auto nc = evaluate(build_chain(s), 0.5);
    SimulationOptions opt;
    opt.samples = 20000;
    const auto stats = simulate_exit(nc, 0, {{1}}, opt);
    CHECK(stats.completed == stats.samples);
    // 4 sigma of the sample mean: sd = 4 / sqrt(20000).
    CHECK(std::abs(stats.mean_exit - 4.0) < 4 * 4.0 / std::sqrt(20000.0));
    CHECK(std::abs(stats.cv - 1.0) < 0.05);
  }

  TEST_CASE("seeded runs are reproducible across execution modes") {
    const auto nc = evaluate(load_fixture("w5.json"), 1e-1);
    SimulationOptions opt;
    opt.samples = 500;
    opt.seed = 123;
    opt.execution = Execution::kSerial;
    const auto a = simulate_exit(nc, 0, {{2}, {4}}, opt);
    opt.execution = Execution::kParallel;
    const auto b = simulate_exit(nc, 0, {{2}, {4}}, opt);
    CHECK(a.mean_exit == b.mean_exit);
    CHECK(a.hit_counts == b.hit_counts);
    CHECK(a.hit_counts[0] + a.hit_counts[1] + a.timeouts == a.samples);
  }

  TEST_CASE("step cap produces timeouts") {
    const auto nc = evaluate(load_fixture("w5.json"), 1e-2);
    SimulationOptions opt;
    opt.samples = 50;
    opt.max_steps = 1;
    const auto s = simulate_exit(nc, 0, {{4}}, opt);
    CHECK(s.timeouts == 50);
    CHECK(s.completed == 0);
  }

  TEST_CASE("W5 from state 3 exits to 5") {
    const auto c = load_fixture("w5.json");
    const auto nc = evaluate(c, 1e-2);
    SimulationOptions opt;
    opt.samples = 2000;
    const auto s = simulate_exit(nc, st(c, 3), {{st(c, 1)}, {st(c, 5)}}, opt);
    // Against the level-one metastates {1} and {5} the split is p = 1/2 each;
    // p(3,5) = 1 only holds at level two, where 1 has joined the valleys.
    const double frac = static_cast<double>(s.hit_counts[1]) / static_cast<double>(s.completed);
    const double sd = std::sqrt(0.25 / static_cast<double>(s.completed));
    CHECK(std::abs(frac - 0.5) < 4 * sd);
  }
}
