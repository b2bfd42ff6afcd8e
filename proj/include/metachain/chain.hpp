#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "metachain/scale_algebra.hpp"

namespace metachain {

struct ScaleSpec {
  std::string name;
  Rational exponent;
};

struct EdgeSpec {
  std::string from;
  std::string to;
  Rational coeff;
  // Exactly one of order / exponents is set.
  std::optional<Rational> order;
  std::vector<Rational> exponents;
};

// Model description as read from (and written to) a model file.
struct ModelSpec {
  std::vector<ScaleSpec> scales;
  std::vector<std::string> states;
  std::vector<EdgeSpec> edges;
};

struct Transition {
  int to;
  ScaledQuantity rate;
};

class Chain {
 public:
  std::size_t size() const noexcept { return names_.size(); }
  const std::string& name(int x) const { return names_[static_cast<std::size_t>(x)]; }
  const std::vector<std::string>& names() const noexcept { return names_; }
  std::optional<int> find(std::string_view name) const;
  int index(std::string_view name) const;  // throws UnknownState

  std::span<const Transition> out(int x) const {
    const auto b = offsets_[static_cast<std::size_t>(x)];
    const auto e = offsets_[static_cast<std::size_t>(x) + 1];
    return {transitions_.data() + b, e - b};
  }
  Weight rate(int x, int y) const;
  std::size_t transition_count() const noexcept { return transitions_.size(); }
  const std::vector<ScaleSpec>& basis() const noexcept { return basis_; }

  // Checks every chain invariant; throws Error on the first violation.
  void validate() const;

  class Builder;

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, int> index_;
  std::vector<std::size_t> offsets_;
  std::vector<Transition> transitions_;
  std::vector<ScaleSpec> basis_;
};

// Index-based construction used by model generators.
class Chain::Builder {
 public:
  Builder(std::vector<ScaleSpec> basis, std::vector<std::string> names);
  // Transitions of x must be added in one call, any order of targets.
  void set_out(int x, std::vector<Transition> transitions);
  // Validates and returns the chain.
  Chain build() &&;

 private:
  std::vector<ScaleSpec> basis_;
  std::vector<std::string> names_;
  std::vector<std::vector<Transition>> out_;
};

// Folds exponent vectors, validates, and returns the chain.
Chain build_chain(const ModelSpec& spec);

// Converts a chain back into a model description (orders, not exponents).
ModelSpec to_model_spec(const Chain& chain);

// FNV-1a over the canonical content of the chain.
std::uint64_t fingerprint(const Chain& chain);

enum class TreeOrder { kBreadthFirst, kDepthFirst };

struct StationaryMeasure {
  std::vector<ScaledQuantity> mu;
  int reference = 0;
};

StationaryMeasure stationary_measure(const Chain& chain, int reference,
                                     TreeOrder order = TreeOrder::kBreadthFirst);

struct Bond {
  int a;  // a < b
  int b;
  ScaledQuantity g;
};

class Conductance {
 public:
  struct Incidence {
    int other;
    int bond;
  };

  const std::vector<Bond>& bonds() const noexcept { return bonds_; }
  std::span<const Incidence> around(int x) const {
    const auto b = offsets_[static_cast<std::size_t>(x)];
    const auto e = offsets_[static_cast<std::size_t>(x) + 1];
    return {incidence_.data() + b, e - b};
  }
  std::size_t size() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  Weight g(int x, int y) const;

  friend Conductance conductances(const Chain& chain, const StationaryMeasure& mu);

 private:
  std::vector<Bond> bonds_;
  std::vector<std::size_t> offsets_;
  std::vector<Incidence> incidence_;
};

Conductance conductances(const Chain& chain, const StationaryMeasure& mu);

}  // namespace metachain
