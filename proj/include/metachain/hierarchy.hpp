#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "metachain/capacity.hpp"
#include "metachain/chain.hpp"
#include "metachain/config.hpp"
#include "metachain/network_potential.hpp"
#include "metachain/trace.hpp"

namespace metachain {

enum class HarmonicChoice { kAuto, kTrace, kNetwork };

struct EngineOptions {
  HarmonicChoice harmonic = HarmonicChoice::kAuto;
  // kAuto uses per-state traces up to this many states.
  std::size_t trace_state_limit = 64;
  bool cross_check = true;
  // The two-way rate check traces the whole chain; skipped above this size.
  std::size_t cross_check_state_limit = 600;
  Execution execution = Execution::kParallel;
  TreeOrder tree_order = TreeOrder::kBreadthFirst;
  std::optional<int> reference;  // anchor of the measure, state 0 by default
  EliminationOrder elimination = EliminationOrder::kMinDegree;
  bool verify_elimination_order = kDebugChecksDefault;
};

// Everything derived once from a chain.
struct Analysis {
  Analysis(const Chain& chain, const EngineOptions& options);

  const Chain& chain;
  EngineOptions options;
  HarmonicMethod method;
  StationaryMeasure mu;
  Conductance g;
  BondIndex index;
};

struct Partition {
  std::vector<std::vector<int>> metastates;
  std::vector<int> delta;
  std::vector<std::vector<int>> parents;  // per metastate, indices into the previous level
};

struct LevelDepths {
  std::vector<ScaledQuantity> measure;   // mu(E_i)
  std::vector<ScaledQuantity> capacity;  // Cap(E_i, rest)
  std::vector<ScaledQuantity> depths;
  ScaledQuantity theta = ScaledQuantity::one();
  std::vector<int> active;
  std::vector<Rational> lambda;
};

struct LevelRates {
  std::vector<std::vector<Rational>> p;
  std::vector<std::vector<Rational>> rates;
};

enum class CrossCheck { kExact, kDisabled, kSkipped };

struct HierarchyLevel {
  int level = 1;
  std::vector<std::vector<int>> metastates;
  std::vector<int> delta;
  std::vector<std::vector<int>> parents;
  LevelDepths depths;
  LevelRates rates;
  CrossCheck cross_check = CrossCheck::kDisabled;
};

struct HierarchyReport {
  std::vector<HierarchyLevel> levels;
  int depth_count = 0;
  std::uint64_t fingerprint = 0;
  int anchor = 0;
  HarmonicMethod method = HarmonicMethod::kTrace;
  std::vector<int> terminal;  // states of the single final class
  std::string note;
};

Partition level1_leaves(const Analysis& a);

LevelDepths level_depths(const Analysis& a, const std::vector<std::vector<int>>& metastates,
                         const std::optional<ScaledQuantity>& previous_theta);

LevelRates level_rates(const Analysis& a, const std::vector<std::vector<int>>& metastates, const LevelDepths& d);

// Two-way rate identity and the exit-rate bound on the trace onto the
// metastates. Throws CrossCheckMismatch on disagreement.
void cross_check_level(const Analysis& a, const HierarchyLevel& level);

Partition next_level(const Analysis& a, const HierarchyLevel& level);

HierarchyReport full_hierarchy(const Analysis& a);
HierarchyReport full_hierarchy(const Chain& chain, const EngineOptions& options = {});

// lim theta * r as eps -> 0 for an average rate r (zero sentinel gives 0).
// Returns nullopt if the product diverges.
std::optional<Rational> scaled_rate_limit(const ScaledQuantity& theta, const Weight& r);

}  // namespace metachain
