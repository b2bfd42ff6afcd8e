#pragma once

#include <optional>
#include <vector>

#include "metachain/chain.hpp"
#include "metachain/network_potential.hpp"
#include "metachain/trace.hpp"

namespace metachain {

struct BottleneckResult {
  ScaledQuantity order_quantity;
  std::vector<int> witness_path;
  std::vector<int> critical_bonds;  // indices into Conductance::bonds()
};

// Widest (max-min) path from A to B over the conductance network.
BottleneckResult bottleneck(const Conductance& g, const BondIndex& index, const std::vector<int>& A,
                            const std::vector<int>& B);
BottleneckResult bottleneck(const Conductance& g, const std::vector<int>& A, const std::vector<int>& B);

// G(A, B ∪ C) == max(G(A, B), G(A, C)).
bool union_bottleneck_identity(const Conductance& g, const std::vector<int>& A, const std::vector<int>& B,
                               const std::vector<int>& C);

enum class HarmonicMethod { kTrace, kNetwork };

struct SharpCapacity {
  ScaledQuantity value;
  BottleneckResult bottleneck;
  // Limit of P_x[T_A < T_B]; the network method leaves states whose value
  // is irrelevant to the capacity unset.
  std::vector<std::optional<Rational>> harmonic;
};

SharpCapacity sharp_capacity(const Chain& chain, const StationaryMeasure& mu, const Conductance& g,
                             const BondIndex& index, const std::vector<int>& A, const std::vector<int>& B,
                             HarmonicMethod method);
SharpCapacity sharp_capacity(const Chain& chain, const StationaryMeasure& mu, const Conductance& g,
                             const std::vector<int>& A, const std::vector<int>& B,
                             HarmonicMethod method = HarmonicMethod::kTrace);

}  // namespace metachain
