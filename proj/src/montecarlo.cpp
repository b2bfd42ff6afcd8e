#include "metachain/montecarlo.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <random>

#include "metachain/errors.hpp"
#include "metachain/parallel.hpp"

namespace metachain {

double evaluate(const ScaledQuantity& q, double epsilon) {
  if (!(epsilon > 0 && epsilon < 1)) throw Error(ErrorCode::kInvalidModel, "epsilon must lie in (0, 1)");
  const double lg = std::log(q.coeff().get_d()) + q.order().get_d() * std::log(epsilon);
  const double r = std::exp(lg);
  if (!(r >= DBL_MIN)) throw Error(ErrorCode::kUnderflow, to_label(q) + " underflows at this epsilon");
  if (!std::isfinite(r)) throw Error(ErrorCode::kNonPositiveRate, to_label(q) + " overflows at this epsilon");
  return r;
}

NumericChain evaluate(const Chain& chain, double epsilon) {
  NumericChain nc;
  nc.epsilon = epsilon;
  nc.offsets.assign(chain.size() + 1, 0);
  nc.total.assign(chain.size(), 0.0);
  for (int x = 0; x < static_cast<int>(chain.size()); ++x) {
    for (const auto& t : chain.out(x)) {
      double r = 0;
      try {
        r = evaluate(t.rate, epsilon);
      } catch (const Error& e) {
        throw Error(e.code(), "rate " + chain.name(x) + " -> " + chain.name(t.to) + " = " + to_label(t.rate) +
                                  (e.code() == ErrorCode::kUnderflow ? " underflows" : " overflows") + " at this epsilon");
      }
      nc.to.push_back(t.to);
      nc.rate.push_back(r);
      nc.total[static_cast<std::size_t>(x)] += r;
    }
    nc.offsets[static_cast<std::size_t>(x) + 1] = nc.to.size();
  }
  return nc;
}

namespace {

struct Sample {
  double time = 0;
  int target = -1;  // -1 on timeout
};

Sample run_sample(const NumericChain& nc, int start, const std::vector<int>& owner, std::uint64_t seed,
                  std::uint64_t index, std::uint64_t max_steps) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  Sample s;
  auto x = static_cast<std::size_t>(start);
  for (std::uint64_t step = 0; step < max_steps; ++step) {
    const double total = nc.total[x];
    if (!(total > 0)) throw Error(ErrorCode::kNonPositiveRate, "absorbing state outside the targets");
    s.time += std::exponential_distribution<double>(total)(rng);
    double u = uniform(rng) * total;
    std::size_t e = nc.offsets[x];
    const std::size_t end = nc.offsets[x + 1];
    for (; e + 1 < end; ++e) {
      if (u < nc.rate[e]) break;
      u -= nc.rate[e];
    }
    x = static_cast<std::size_t>(nc.to[e]);
    if (owner[x] >= 0) {
      s.target = owner[x];
      return s;
    }
  }
  return s;
}

}  // namespace

ExitStatistics simulate_exit(const NumericChain& nc, int start, const std::vector<std::vector<int>>& targets,
                             const SimulationOptions& options) {
  const auto owner = label_sets(nc.size(), targets);
  if (start < 0 || static_cast<std::size_t>(start) >= nc.size())
    throw Error(ErrorCode::kUnknownState, "start state out of range");
  if (owner[static_cast<std::size_t>(start)] >= 0)
    throw Error(ErrorCode::kOverlappingSets, "the start state lies in a target set");

  std::vector<Sample> samples(options.samples);
  for_each_index(samples.size(), options.execution, [&](std::size_t i) {
    samples[i] = run_sample(nc, start, owner, options.seed, i, options.max_steps);
  });

  ExitStatistics st;
  st.samples = options.samples;
  st.seed = options.seed;
  st.epsilon = nc.epsilon;
  st.hit_counts.assign(targets.size(), 0);
  st.mean_exit_by_target.assign(targets.size(), 0.0);
  double sum = 0;
  double sum_sq = 0;
  for (const auto& s : samples) {
    if (s.target < 0) {
      ++st.timeouts;
      continue;
    }
    ++st.completed;
    ++st.hit_counts[static_cast<std::size_t>(s.target)];
    st.mean_exit_by_target[static_cast<std::size_t>(s.target)] += s.time;
    sum += s.time;
    sum_sq += s.time * s.time;
  }
  for (std::size_t k = 0; k < targets.size(); ++k)
    if (st.hit_counts[k] > 0) st.mean_exit_by_target[k] /= static_cast<double>(st.hit_counts[k]);
  if (st.completed > 0) {
    const double n = static_cast<double>(st.completed);
    st.mean_exit = sum / n;
    const double var = st.completed > 1 ? (sum_sq - n * st.mean_exit * st.mean_exit) / (n - 1) : 0.0;
    st.cv = st.mean_exit > 0 ? std::sqrt(std::max(var, 0.0)) / st.mean_exit : 0.0;
  }
  return st;
}

}  // namespace metachain
