#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "metachain/chain.hpp"

namespace metachain {

// Bonds ranked by asymptotic size and grouped by order (strongest first).
class BondIndex {
 public:
  explicit BondIndex(const Conductance& g);

  // Equal conductances share a rank; a larger rank is asymptotically larger.
  int rank(int bond) const { return rank_[static_cast<std::size_t>(bond)]; }
  const std::vector<Rational>& orders() const noexcept { return orders_; }
  const std::vector<int>& group(std::size_t k) const { return groups_[k]; }
  std::size_t group_count() const noexcept { return groups_.size(); }

 private:
  std::vector<int> rank_;
  std::vector<Rational> orders_;
  std::vector<std::vector<int>> groups_;
};

using SparseVector = std::vector<std::pair<int, Rational>>;

struct PotentialOptions {
  // Stop once every query state has a value (ignored when empty).
  std::vector<int> queries;
  // Process bond groups up to and including this order, then stop.
  std::optional<Rational> stop_after_order;
};

// Limit, as eps -> 0, of the harmonic extension of the unit vectors placed
// on the target sets. States either carry a value (a probability vector
// over targets) or still belong to an undetermined class of states that the
// limit potential cannot distinguish.
class PotentialField {
 public:
  int targets() const noexcept { return targets_; }
  int representative(int x) const { return rep_[static_cast<std::size_t>(x)]; }
  const SparseVector* value(int x) const {
    const auto& v = value_[static_cast<std::size_t>(rep_[static_cast<std::size_t>(x)])];
    return v ? &*v : nullptr;
  }
  Rational component(int x, int k) const;
  std::vector<Rational> dense(int x) const;

  friend PotentialField limit_potential(const Conductance&, const BondIndex&, const std::vector<int>&, int,
                                        const PotentialOptions&);

 private:
  int targets_ = 0;
  std::vector<int> rep_;
  std::vector<std::optional<SparseVector>> value_;
};

// target_of[x] is the target index of x or -1.
PotentialField limit_potential(const Conductance& g, const BondIndex& index, const std::vector<int>& target_of,
                               int targets, const PotentialOptions& options = {});

}  // namespace metachain
