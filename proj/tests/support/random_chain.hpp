#pragma once

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "metachain/chain.hpp"

namespace testing_support {

inline const std::vector<metachain::Rational>& order_palette() {
  static const std::vector<metachain::Rational> p{0, metachain::Rational(1, 2), 1, 2, 3};
  return p;
}

// Random irreducible reversible chain on n states. The measure orders U(x)
// and the conductance excesses are drawn from {0, 1/2, 1, 2, 3}; rates are
// g/mu and the whole chain is shifted so the smallest rate order is 0.
inline metachain::Chain random_chain(std::mt19937_64& rng, int n, double extra_edge_p = 0.3,
                                     const std::vector<metachain::Rational>& pal = order_palette()) {
  using metachain::Rational;
  using metachain::ScaledQuantity;
  std::uniform_int_distribution<std::size_t> pick(0, pal.size() - 1);
  std::uniform_int_distribution<int> small(1, 3);
  std::bernoulli_distribution extra(extra_edge_p);

  std::vector<Rational> U(static_cast<std::size_t>(n));
  std::vector<Rational> mc(static_cast<std::size_t>(n));
  for (int x = 0; x < n; ++x) {
    U[static_cast<std::size_t>(x)] = pal[pick(rng)];
    mc[static_cast<std::size_t>(x)] = Rational(small(rng), small(rng));
  }
  std::vector<std::pair<int, int>> edges;
  for (int x = 1; x < n; ++x) edges.emplace_back(std::uniform_int_distribution<int>(0, x - 1)(rng), x);
  for (int x = 0; x < n; ++x)
    for (int y = x + 1; y < n; ++y)
      if (std::find(edges.begin(), edges.end(), std::make_pair(x, y)) == edges.end() &&
          std::find(edges.begin(), edges.end(), std::make_pair(y, x)) == edges.end() && extra(rng))
        edges.emplace_back(x, y);

  struct Bond {
    int a, b;
    Rational order, coeff;
  };
  std::vector<Bond> bonds;
  Rational lowest = 1000;
  for (auto [a, b] : edges) {
    Rational G = std::max<Rational>(U[static_cast<std::size_t>(a)], U[static_cast<std::size_t>(b)]) + pal[pick(rng)];
    bonds.push_back({a, b, G, Rational(small(rng), small(rng))});
    lowest = std::min<Rational>({lowest, G - U[static_cast<std::size_t>(a)], G - U[static_cast<std::size_t>(b)]});
  }

  std::vector<std::string> names;
  for (int x = 0; x < n; ++x) names.push_back("s" + std::to_string(x));
  std::vector<std::vector<metachain::Transition>> out(static_cast<std::size_t>(n));
  for (const auto& bd : bonds)
    for (auto [x, y] : {std::make_pair(bd.a, bd.b), std::make_pair(bd.b, bd.a)}) {
      const auto ux = static_cast<std::size_t>(x);
      out[ux].push_back({y, ScaledQuantity(bd.coeff / mc[ux], bd.order - U[ux] - lowest)});
    }
  metachain::Chain::Builder builder({metachain::ScaleSpec{"eps", Rational(1)}}, std::move(names));
  for (int x = 0; x < n; ++x) builder.set_out(x, std::move(out[static_cast<std::size_t>(x)]));
  return std::move(builder).build();
}

}  // namespace testing_support
