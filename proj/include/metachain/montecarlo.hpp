#pragma once

#include <cstdint>
#include <vector>

#include "metachain/chain.hpp"
#include "metachain/trace.hpp"

namespace metachain {

// Generator evaluated at a concrete eps.
struct NumericChain {
  double epsilon = 0;
  std::vector<std::size_t> offsets;
  std::vector<int> to;
  std::vector<double> rate;
  std::vector<double> total;  // exit rate per state

  std::size_t size() const noexcept { return total.size(); }
};

double evaluate(const ScaledQuantity& q, double epsilon);
NumericChain evaluate(const Chain& chain, double epsilon);

struct SimulationOptions {
  std::uint64_t samples = 10000;
  std::uint64_t seed = 42;
  std::uint64_t max_steps = 100000000;  // per sample
  Execution execution = Execution::kParallel;
};

struct ExitStatistics {
  std::uint64_t samples = 0;
  std::uint64_t completed = 0;  // samples that hit a target
  std::uint64_t timeouts = 0;
  double mean_exit = 0;
  double cv = 0;
  std::vector<std::uint64_t> hit_counts;  // per target set
  std::vector<double> mean_exit_by_target;
  std::uint64_t seed = 0;
  double epsilon = 0;
};

ExitStatistics simulate_exit(const NumericChain& nc, int start, const std::vector<std::vector<int>>& targets,
                             const SimulationOptions& options);

}  // namespace metachain
