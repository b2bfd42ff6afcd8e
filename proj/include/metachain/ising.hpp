#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "metachain/capacity.hpp"
#include "metachain/chain.hpp"
#include "metachain/hierarchy.hpp"

namespace metachain {

// Spin configuration on the L x L torus; bit r*L + c set means spin +1.
using Config = std::uint64_t;

struct IsingModel {
  int L = 0;
  Rational h;
  int n0 = 0;              // floor(2/h)
  bool in_regime = false;  // L > (n0+1)^2 + 1

  int sites() const noexcept { return L * L; }
  Config all_plus() const { return sites() == 64 ? ~Config{0} : (Config{1} << sites()) - 1; }
  Config all_minus() const { return 0; }
};

// Throws InvalidField unless 0 < h < 2 and 2/h is not an integer.
IsingModel make_ising(int L, const Rational& h);

std::string config_name(const IsingModel& m, Config s);
Config parse_config(const IsingModel& m, std::string_view name);

Rational energy(const IsingModel& m, Config s);
Rational flip_cost(const IsingModel& m, Config s, int site);

// Full Glauber chain with eps = exp(-beta); state index equals the
// configuration bits. Throws StateSpaceTooLarge when L exceeds max_L.
Chain build_ising_chain(const IsingModel& m, int max_L = 4, Execution exec = Execution::kParallel);

enum class Shape { kRectangle, kRing, kWhole, kOther };

struct Droplet {
  Shape shape = Shape::kOther;
  int row0 = 0;  // first row of the (cyclic) row interval
  int col0 = 0;
  int height = 0;
  int width = 0;
  int size = 0;
};

struct IsingConfigInfo {
  Config config = 0;
  bool in_omega_o = false;
  int ell = 0;
  int Nr = 0;
  int Ns = 0;
  int rings = 0;
  std::vector<Droplet> components;
};

bool in_omega_o(const IsingModel& m, Config s);
IsingConfigInfo classify(const IsingModel& m, Config s);

struct SaddleSets {
  std::vector<Config> W;
  std::array<std::vector<Config>, 4> Wj;  // Wj[j], j = 0..3
  std::vector<Config> D;
  std::vector<Config> S;
  std::vector<Config> Ss;
  std::map<Config, std::vector<Config>> W_into;  // successor -> saddles leading to it
};

// Throws NotInOmegaO for configurations outside Omega_o or equal to +-1.
SaddleSets saddle_sets(const IsingModel& m, const IsingConfigInfo& info);

// Repeatedly flips negative spins with at least two positive neighbours.
Config grow_closure(const IsingModel& m, Config s);

Rational predicted_theta(const IsingModel& m, const IsingConfigInfo& info, const SaddleSets& sets);
Rational predicted_p(const IsingModel& m, const IsingConfigInfo& info, const SaddleSets& sets, Config successor);

// c(h) = 4(n0+1) - h[(n0+1)n0 + 1].
Rational nucleation_exponent(const IsingModel& m);

struct MinusOneSaddles {
  std::vector<Config> W1;
  std::vector<Config> W2;
  Rational theta;
};
// Throws NotApplicable when the critical droplet does not fit in the torus.
MinusOneSaddles minus_one_saddles(const IsingModel& m);

// Predicted order of G({sigma}, Omega_sigma) / mu(sigma).
Rational barrier_exponent(const IsingModel& m, const IsingConfigInfo& info);

std::vector<Config> enumerate_omega_o(const IsingModel& m, Execution exec = Execution::kParallel);

struct BarrierRecord {
  Config sigma = 0;
  Rational predicted;
  Rational engine;
  bool match = false;
  std::vector<int> witness;
};

BarrierRecord verify_barrier(const IsingModel& m, const Conductance& g, const BondIndex& index,
                               const StationaryMeasure& mu, const std::vector<Config>& omega_o, Config sigma);

struct OmegaRecord {
  IsingConfigInfo info;
  BarrierRecord barrier;
  std::size_t W = 0;
  std::optional<std::size_t> W_expected;
  bool W_ok = true;
  std::optional<Rational> theta;
  std::optional<Rational> p_sum;
  bool p_ok = true;
};

struct IsingVerification {
  IsingModel model;
  std::size_t states = 0;
  std::vector<OmegaRecord> omega;
  bool leaves_match = false;
  std::size_t leaves = 0;
  std::size_t barrier_matches = 0;
  std::size_t barrier_mismatches = 0;
  bool cardinalities_ok = true;
  bool p_sums_ok = true;
  std::optional<HierarchyReport> hierarchy;
  bool terminal_is_plus = false;
  Rational c_h;
  std::optional<MinusOneSaddles> minus_one;
  std::vector<std::string> notes;
};

struct IsingVerifyOptions {
  EngineOptions engine;
  bool run_hierarchy = true;
  int max_L = 4;
};

IsingVerification verify_ising(int L, const Rational& h, const IsingVerifyOptions& options = {});

}  // namespace metachain
