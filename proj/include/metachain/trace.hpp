#pragma once

#include <map>
#include <vector>

#include "metachain/chain.hpp"
#include "metachain/config.hpp"

namespace metachain {

enum class Execution { kSerial, kParallel };

// Rates of the chain watched only on the kept states.
class TraceChain {
 public:
  TraceChain(const Chain& chain, const StationaryMeasure& mu);

  std::size_t universe() const noexcept { return kept_.size(); }
  bool kept(int x) const { return kept_[static_cast<std::size_t>(x)] != 0; }
  std::size_t kept_count() const noexcept { return kept_count_; }
  std::vector<int> kept_states() const;
  const std::map<int, ScaledQuantity>& out(int x) const { return out_[static_cast<std::size_t>(x)]; }
  Weight rate(int x, int y) const;
  const ScaledQuantity& mu(int x) const { return mu_[static_cast<std::size_t>(x)]; }

  friend bool operator==(const TraceChain& a, const TraceChain& b) {
    return a.kept_ == b.kept_ && a.out_ == b.out_;
  }

  // In-place elimination; see eliminate_state.
  void eliminate(int w);

 private:
  std::vector<char> kept_;
  std::size_t kept_count_ = 0;
  std::vector<std::map<int, ScaledQuantity>> out_;
  std::vector<ScaledQuantity> mu_;
};

TraceChain eliminate_state(TraceChain t, int w);

// kMinDegree repeatedly removes the remaining state with the fewest trace
// neighbours (smallest id on ties), which keeps fill-in low on lattices.
enum class EliminationOrder { kAscending, kDescending, kMinDegree };

// Eliminates every state outside F one at a time. With verify_order set the
// elimination is repeated in the opposite order and both results compared.
TraceChain trace_onto(const Chain& chain, const StationaryMeasure& mu, const std::vector<int>& F,
                      EliminationOrder order = EliminationOrder::kAscending, bool verify_order = kDebugChecksDefault);

// Explicit elimination sequence (must list exactly the states outside F).
TraceChain trace_onto(const Chain& chain, const StationaryMeasure& mu, const std::vector<int>& F,
                      const std::vector<int>& sequence);

Weight average_rate(const TraceChain& t, const std::vector<int>& A, const std::vector<int>& B);

struct HittingLimit {
  std::vector<Rational> f;
};

// lim P_x[T_A < T_B] for every state, each from its own trace onto {x} ∪ A ∪ B.
HittingLimit hitting_limit(const Chain& chain, const StationaryMeasure& mu, const std::vector<int>& A,
                           const std::vector<int>& B, Execution exec = Execution::kSerial);

// For each query x: lim P_x[the first target set hit is targets[j]], j = 0..k-1.
// Queries inside a target get the corresponding unit vector.
std::vector<std::vector<Rational>> hitting_distribution_by_trace(const Chain& chain, const StationaryMeasure& mu,
                                                                 const std::vector<std::vector<int>>& targets,
                                                                 const std::vector<int>& queries,
                                                                 Execution exec = Execution::kSerial);

// Throws OverlappingSets / EmptySubset on malformed target families; returns
// the owner index of each state (-1 if in no set).
std::vector<int> label_sets(std::size_t n, const std::vector<std::vector<int>>& sets);

}  // namespace metachain
