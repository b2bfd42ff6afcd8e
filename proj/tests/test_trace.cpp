#include <doctest.h>

#include <algorithm>
#include <random>

#include "metachain/errors.hpp"
#include "metachain/network_potential.hpp"
#include "metachain/trace.hpp"
#include "support/fixtures.hpp"
#include "support/oracle.hpp"
#include "support/random_chain.hpp"

using namespace metachain;
using namespace testing_support;

TEST_SUITE("trace_reduction") {
  TEST_CASE("W3 single elimination") {
    const auto c = load_fixture("w3.json");
    const auto mu = stationary_measure(c, 0);
    const auto t = eliminate_state(TraceChain(c, mu), st(c, 2));
    CHECK(*t.rate(st(c, 1), st(c, 3)) == sq(1, 2, 2, 1));
    CHECK(*average_rate(t, {st(c, 1)}, {st(c, 3)}) == sq(1, 2, 2, 1));
  }

  TEST_CASE("W5 onto {1,3,5}") {
    const auto c = load_fixture("w5.json");
    const auto mu = stationary_measure(c, 0);
    const std::vector<int> F{st(c, 1), st(c, 3), st(c, 5)};
    const auto t = trace_onto(c, mu, F);
    CHECK(*t.rate(st(c, 1), st(c, 3)) == sq(1, 2, 1, 1));
    CHECK(*t.rate(st(c, 3), st(c, 1)) == sq(1, 2, 2, 1));
    CHECK(*t.rate(st(c, 3), st(c, 5)) == sq(1, 2, 2, 1));
    CHECK(*t.rate(st(c, 5), st(c, 3)) == sq(1, 2, 4, 1));
    CHECK(!t.rate(st(c, 1), st(c, 5)));
    // Either elimination order gives the same trace.
    CHECK(trace_onto(c, mu, F, std::vector<int>{st(c, 2), st(c, 4)}) ==
          trace_onto(c, mu, F, std::vector<int>{st(c, 4), st(c, 2)}));
    CHECK(trace_onto(c, mu, F, EliminationOrder::kAscending, true) ==
          trace_onto(c, mu, F, EliminationOrder::kDescending));
  }

  TEST_CASE("trace rates against a numeric Schur complement") {
    // The generator of the trace on F is the Schur complement of Q.
    const auto c = load_fixture("w5.json");
    const auto mu = stationary_measure(c, 0);
    const std::vector<int> F{st(c, 1), st(c, 3), st(c, 5)};
    const auto t = trace_onto(c, mu, F);
    const oracle::Real eps = 1e-3L;
    const auto r = oracle::rates(c, eps);
    oracle::Matrix q = r;
    for (int i = 0; i < 5; ++i) q(i, i) = -r.row(i).sum();
    const std::vector<int> inner{st(c, 2), st(c, 4)};
    oracle::Matrix qff(3, 3), qfi(3, 2), qif(2, 3), qii(2, 2);
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) qff(a, b) = q(F[a], F[b]);
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 2; ++b) {
        qfi(a, b) = q(F[a], inner[b]);
        qif(b, a) = q(inner[b], F[a]);
      }
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) qii(a, b) = q(inner[a], inner[b]);
    const oracle::Matrix schur = qff - qfi * qii.fullPivLu().solve(qif);
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        if (a == b) continue;
        const auto w = t.rate(F[a], F[b]);
        if (!w) {
          CHECK(schur(a, b) < 1e-12L);
          continue;
        }
        CHECK(std::abs(schur(a, b) / oracle::value(*w, eps) - 1) < 0.01L);
      }
  }

  TEST_CASE("elimination-order invariance on random chains") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 100; ++trial) {
      const auto c = random_chain(rng, 4 + trial % 5);
      const auto mu = stationary_measure(c, 0);
      const int n = static_cast<int>(c.size());
      std::vector<int> F{0, n - 1}, rest;
      for (int x = 1; x < n - 1; ++x) rest.push_back(x);
      const auto base = trace_onto(c, mu, F);
      CHECK(trace_onto(c, mu, F, EliminationOrder::kMinDegree, true) == base);
      std::shuffle(rest.begin(), rest.end(), rng);
      CHECK(trace_onto(c, mu, F, rest) == base);
    }
  }

  TEST_CASE("trace preconditions") {
    const auto c = load_fixture("w5.json");
    const auto mu = stationary_measure(c, 0);
    CHECK_THROWS_AS(trace_onto(c, mu, {}), Error);
    CHECK_THROWS_AS(trace_onto(c, mu, {0, 1, 2, 3, 4}), Error);
    auto t = trace_onto(c, mu, {0, 2});
    CHECK_THROWS_AS(t.eliminate(4), Error);
    CHECK_THROWS_AS(t.eliminate(0), Error);
    CHECK_THROWS_AS(average_rate(t, {0}, {0}), Error);
  }

  TEST_CASE("symmetric triangle traces to symmetric rates") {
    ModelSpec s;
    s.scales = {{"eps", Rational(1)}};
    s.states = {"a", "b", "c"};
    s.edges = {{"a", "b", Rational(1), Rational(1), {}}, {"b", "a", Rational(1), Rational(1), {}},
               {"b", "c", Rational(1), Rational(0), {}}, {"c", "b", Rational(1), Rational(0), {}},
               {"a", "c", Rational(2), Rational(2), {}}, {"c", "a", Rational(2), Rational(2), {}}};
    const auto c = build_chain(s);
    const auto t = trace_onto(c, stationary_measure(c, 0), {0, 2});
    CHECK(*t.rate(0, 2) == *t.rate(2, 0));
  }

  TEST_CASE("eliminating an isolated state leaves rates unchanged") {
    const auto c = load_fixture("w5.json");
    const auto mu = stationary_measure(c, 0);
    const auto t = eliminate_state(TraceChain(c, mu), st(c, 5));
    CHECK(*t.rate(st(c, 1), st(c, 2)) == *c.rate(st(c, 1), st(c, 2)));
  }

  TEST_CASE("hitting limits") {
    const auto w3 = load_fixture("w3.json");
    const auto f3 = hitting_limit(w3, stationary_measure(w3, 0), {st(w3, 1)}, {st(w3, 3)});
    CHECK(f3.f[st(w3, 2)] == Rational(1, 2));
    CHECK(f3.f[st(w3, 1)] == 1);
    CHECK(f3.f[st(w3, 3)] == 0);
    const auto num3 = oracle::absorption(oracle::rates(w3, 1e-3L), {st(w3, 1)}, {st(w3, 3)});
    CHECK(std::abs(num3(st(w3, 2)) - 0.5L) < 0.005L);

    const auto w5 = load_fixture("w5.json");
    const auto mu5 = stationary_measure(w5, 0);
    const auto f5 = hitting_limit(w5, mu5, {st(w5, 3)}, {st(w5, 5)}, Execution::kParallel);
    CHECK(f5.f[st(w5, 4)] == Rational(1, 2));
    CHECK(f5.f[st(w5, 2)] == 1);
    CHECK(f5.f[st(w5, 1)] == 1);
    const auto num5 = oracle::absorption(oracle::rates(w5, 1e-3L), {st(w5, 3)}, {st(w5, 5)});
    CHECK(std::abs(num5(st(w5, 4)) - 0.5L) < 0.005L);
    CHECK(std::abs(num5(st(w5, 1)) - 1) < 0.01L);
  }

  TEST_CASE("average rates balance mass flow") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 40; ++trial) {
      const auto c = random_chain(rng, 4 + trial % 6);
      const auto mu = stationary_measure(c, 0);
      const auto t = trace_onto(c, mu, {0, 1, 2});
      const auto ab = average_rate(t, {0}, {1, 2});
      const auto ba = average_rate(t, {1, 2}, {0});
      const Weight mass_b = add(Weight(mu.mu[1]), Weight(mu.mu[2]));
      CHECK(mul(ab, Weight(mu.mu[0])) == mul(ba, mass_b));
    }
  }

  TEST_CASE("dual routes agree on random chains") {
    // Multi-target hitting limits: trace elimination against the network
    // potential solver, and serial against parallel.
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 60; ++trial) {
      const auto c = random_chain(rng, 4 + trial % 7);
      const auto mu = stationary_measure(c, 0);
      const int n = static_cast<int>(c.size());
      const std::vector<std::vector<int>> targets{{0}, {n - 1}, {n / 2}};
      std::vector<int> queries;
      for (int x = 0; x < n; ++x) queries.push_back(x);
      const auto serial = hitting_distribution_by_trace(c, mu, targets, queries, Execution::kSerial);
      const auto parallel = hitting_distribution_by_trace(c, mu, targets, queries, Execution::kParallel);
      CHECK(serial == parallel);
      const auto g = conductances(c, mu);
      const BondIndex index(g);
      const auto field = limit_potential(g, index, label_sets(c.size(), targets), 3);
      for (int x = 0; x < n; ++x) CHECK(field.dense(x) == serial[static_cast<std::size_t>(x)]);
    }
  }
}
