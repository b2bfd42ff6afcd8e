#include "metachain/capacity.hpp"

#include <algorithm>
#include <limits>
#include <queue>

#include "metachain/errors.hpp"

namespace metachain {

BottleneckResult bottleneck(const Conductance& g, const BondIndex& index, const std::vector<int>& A,
                            const std::vector<int>& B) {
  const std::size_t n = g.size();
  const auto owner = label_sets(n, {A, B});
  constexpr int kInfinite = std::numeric_limits<int>::max();
  constexpr int kUnset = -1;
  // width[x] is the rank of the best bottleneck found so far; via[x] the bond.
  std::vector<int> width(n, kUnset);
  std::vector<int> via(n, -1);
  std::vector<int> pred(n, -1);
  std::vector<char> done(n, 0);
  // Max width first, then smallest state.
  using Item = std::pair<int, int>;
  auto worse = [](const Item& a, const Item& b) {
    if (a.first != b.first) return a.first < b.first;
    return a.second > b.second;
  };
  std::priority_queue<Item, std::vector<Item>, decltype(worse)> heap(worse);
  for (int a : A) {
    width[static_cast<std::size_t>(a)] = kInfinite;
    heap.emplace(kInfinite, a);
  }
  const auto& bonds = g.bonds();
  int reached = -1;
  while (!heap.empty()) {
    const auto [w, x] = heap.top();
    heap.pop();
    if (done[static_cast<std::size_t>(x)] || w != width[static_cast<std::size_t>(x)]) continue;
    done[static_cast<std::size_t>(x)] = 1;
    if (owner[static_cast<std::size_t>(x)] == 1) {
      reached = x;
      break;
    }
    for (const auto& inc : g.around(x)) {
      const auto y = static_cast<std::size_t>(inc.other);
      if (done[y]) continue;
      const int r = std::min(w, index.rank(inc.bond));
      if (r > width[y]) {
        width[y] = r;
        pred[y] = x;
        via[y] = r == w ? via[static_cast<std::size_t>(x)] : inc.bond;
        heap.emplace(r, inc.other);
      }
    }
  }
  if (reached < 0) throw Error(ErrorCode::kDisconnected, "no path between the two sets");

  BottleneckResult res{bonds[static_cast<std::size_t>(via[static_cast<std::size_t>(reached)])].g, {}, {}};
  for (int x = reached; x >= 0; x = pred[static_cast<std::size_t>(x)]) res.witness_path.push_back(x);
  std::reverse(res.witness_path.begin(), res.witness_path.end());
  const auto& order = res.order_quantity.order();
  const auto it = std::lower_bound(index.orders().begin(), index.orders().end(), order);
  res.critical_bonds = index.group(static_cast<std::size_t>(it - index.orders().begin()));
  return res;
}

BottleneckResult bottleneck(const Conductance& g, const std::vector<int>& A, const std::vector<int>& B) {
  const BondIndex index(g);
  return bottleneck(g, index, A, B);
}

bool union_bottleneck_identity(const Conductance& g, const std::vector<int>& A, const std::vector<int>& B,
                               const std::vector<int>& C) {
  const BondIndex index(g);
  std::vector<int> BC = B;
  BC.insert(BC.end(), C.begin(), C.end());
  const auto joint = bottleneck(g, index, A, BC).order_quantity;
  const auto gb = bottleneck(g, index, A, B).order_quantity;
  const auto gc = bottleneck(g, index, A, C).order_quantity;
  const auto& best = asymptotic_cmp(gb, gc) >= 0 ? gb : gc;
  return joint == best;
}

SharpCapacity sharp_capacity(const Chain& chain, const StationaryMeasure& mu, const Conductance& g,
                             const BondIndex& index, const std::vector<int>& A, const std::vector<int>& B,
                             HarmonicMethod method) {
  BottleneckResult bn = bottleneck(g, index, A, B);
  const Rational gorder = bn.order_quantity.order();
  const auto& bonds = g.bonds();
  const std::size_t n = chain.size();
  std::vector<std::optional<Rational>> f(n);
  std::optional<PotentialField> field;

  if (method == HarmonicMethod::kTrace) {
    auto h = hitting_limit(chain, mu, A, B);
    for (std::size_t x = 0; x < n; ++x) f[x] = std::move(h.f[x]);
  } else {
    std::vector<int> target_of(n, -1);
    for (int a : A) target_of[static_cast<std::size_t>(a)] = 0;
    for (int b : B) target_of[static_cast<std::size_t>(b)] = 1;
    PotentialOptions opt;
    opt.stop_after_order = gorder;
    field = limit_potential(g, index, target_of, 2, opt);
    for (std::size_t x = 0; x < n; ++x)
      if (field->value(static_cast<int>(x))) f[x] = field->component(static_cast<int>(x), 0);
  }

  // Potential drop across a bond; ends in one undetermined class are equal.
  const auto edge_gap = [&](int bi) -> std::optional<Rational> {
    const auto& b = bonds[static_cast<std::size_t>(bi)];
    const auto& fa = f[static_cast<std::size_t>(b.a)];
    const auto& fb = f[static_cast<std::size_t>(b.b)];
    if (fa && fb) return Rational(*fa - *fb);
    if (field && field->representative(b.a) == field->representative(b.b)) return Rational(0);
    return std::nullopt;
  };

  for (std::size_t k = 0; k < index.group_count() && index.orders()[k] < gorder; ++k) {
    for (int bi : index.group(k)) {
      auto gap = edge_gap(bi);
      if (!gap) throw Error(ErrorCode::kInternal, "limit potential undetermined on a strong bond");
      if (sgn(*gap) != 0) {
        const auto& b = bonds[static_cast<std::size_t>(bi)];
        throw Error(ErrorCode::kHarmonicInconsistency,
                    "limit potential differs across strong bond " + chain.name(b.a) + " -- " + chain.name(b.b));
      }
    }
  }

  Rational coeff(0);
  for (int bi : bn.critical_bonds) {
    auto gap = edge_gap(bi);
    if (!gap) throw Error(ErrorCode::kInternal, "limit potential undetermined on a critical bond");
    coeff += bonds[static_cast<std::size_t>(bi)].g.coeff() * *gap * *gap;
  }
  if (sgn(coeff) <= 0) throw Error(ErrorCode::kInternal, "critical bonds carry no potential drop");
  return SharpCapacity{ScaledQuantity(coeff, gorder), std::move(bn), std::move(f)};
}

SharpCapacity sharp_capacity(const Chain& chain, const StationaryMeasure& mu, const Conductance& g,
                             const std::vector<int>& A, const std::vector<int>& B, HarmonicMethod method) {
  const BondIndex index(g);
  return sharp_capacity(chain, mu, g, index, A, B, method);
}

}  // namespace metachain
