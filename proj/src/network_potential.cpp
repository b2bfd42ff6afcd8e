#include "metachain/network_potential.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "metachain/errors.hpp"

namespace metachain {

BondIndex::BondIndex(const Conductance& g) {
  const auto& bonds = g.bonds();
  std::vector<int> perm(bonds.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::sort(perm.begin(), perm.end(), [&](int a, int b) {
    const int c = asymptotic_cmp(bonds[static_cast<std::size_t>(a)].g, bonds[static_cast<std::size_t>(b)].g);
    if (c != 0) return c > 0;
    return a < b;
  });
  rank_.assign(bonds.size(), 0);
  int r = 0;
  for (std::size_t i = perm.size(); i-- > 0;) {
    if (i + 1 < perm.size() &&
        !(bonds[static_cast<std::size_t>(perm[i])].g == bonds[static_cast<std::size_t>(perm[i + 1])].g))
      ++r;
    rank_[static_cast<std::size_t>(perm[i])] = r;
  }
  for (int b : perm) {
    const auto& q = bonds[static_cast<std::size_t>(b)].g.order();
    if (orders_.empty() || orders_.back() != q) {
      orders_.push_back(q);
      groups_.emplace_back();
    }
    groups_.back().push_back(b);
  }
  for (auto& grp : groups_) std::sort(grp.begin(), grp.end());
}

Rational PotentialField::component(int x, int k) const {
  const auto* v = value(x);
  if (!v) throw Error(ErrorCode::kInternal, "potential is undetermined at state index " + std::to_string(x));
  for (const auto& [i, c] : *v)
    if (i == k) return c;
  return Rational(0);
}

std::vector<Rational> PotentialField::dense(int x) const {
  std::vector<Rational> d(static_cast<std::size_t>(targets_));
  const auto* v = value(x);
  if (!v) throw Error(ErrorCode::kInternal, "potential is undetermined at state index " + std::to_string(x));
  for (const auto& [i, c] : *v) d[static_cast<std::size_t>(i)] = c;
  return d;
}

namespace {

struct Dsu {
  std::vector<int> parent;
  explicit Dsu(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      auto& p = parent[static_cast<std::size_t>(x)];
      p = parent[static_cast<std::size_t>(p)];
      x = p;
    }
    return x;
  }
};

using Row = std::map<int, Rational>;

SparseVector combine(const std::vector<std::pair<const SparseVector*, Rational>>& terms) {
  std::map<int, Rational> acc;
  for (const auto& [vec, w] : terms)
    for (const auto& [i, c] : *vec) acc[i] += w * c;
  SparseVector out;
  out.reserve(acc.size());
  for (auto& [i, c] : acc)
    if (sgn(c) != 0) out.emplace_back(i, std::move(c));
  return out;
}

// Dirichlet problem on one component: free local nodes `members`, every other
// local node referenced by adj is a boundary node with a known value.
void solve_component(const std::vector<int>& members, std::vector<Row>& adj, const std::vector<char>& is_free,
                     const std::vector<int>& nodes, std::vector<std::optional<SparseVector>>& value) {
  std::set<std::pair<std::size_t, int>> queue;
  for (int u : members) queue.emplace(adj[static_cast<std::size_t>(u)].size(), u);

  struct Record {
    int u;
    std::vector<std::pair<int, Rational>> weights;  // normalized
  };
  std::vector<Record> records;
  records.reserve(members.size());

  while (!queue.empty()) {
    const int u = queue.begin()->second;
    queue.erase(queue.begin());
    Row row = std::move(adj[static_cast<std::size_t>(u)]);
    adj[static_cast<std::size_t>(u)].clear();
    Rational total(0);
    for (const auto& [v, w] : row) total += w;
    if (sgn(total) == 0) throw Error(ErrorCode::kInternal, "free node without conductance in potential solve");

    std::vector<std::pair<int, Rational>> nbrs(row.begin(), row.end());
    for (const auto& [a, wa] : nbrs) {
      if (!is_free[static_cast<std::size_t>(a)]) continue;
      auto& ra = adj[static_cast<std::size_t>(a)];
      queue.erase({ra.size(), a});
      ra.erase(u);
    }
    for (std::size_t i = 0; i < nbrs.size(); ++i) {
      const int a = nbrs[i].first;
      const bool fa = is_free[static_cast<std::size_t>(a)] != 0;
      for (std::size_t j = i + 1; j < nbrs.size(); ++j) {
        const int b = nbrs[j].first;
        const bool fb = is_free[static_cast<std::size_t>(b)] != 0;
        if (!fa && !fb) continue;
        const Rational inc = nbrs[i].second * nbrs[j].second / total;
        if (fa) adj[static_cast<std::size_t>(a)][b] += inc;
        if (fb) adj[static_cast<std::size_t>(b)][a] += inc;
      }
    }
    for (const auto& [a, wa] : nbrs)
      if (is_free[static_cast<std::size_t>(a)]) queue.emplace(adj[static_cast<std::size_t>(a)].size(), a);

    Record rec{u, {}};
    rec.weights.reserve(nbrs.size());
    for (auto& [v, w] : nbrs) rec.weights.emplace_back(v, w / total);
    records.push_back(std::move(rec));
  }

  for (auto it = records.rbegin(); it != records.rend(); ++it) {
    std::vector<std::pair<const SparseVector*, Rational>> terms;
    terms.reserve(it->weights.size());
    for (const auto& [v, w] : it->weights) {
      const auto& val = value[static_cast<std::size_t>(nodes[static_cast<std::size_t>(v)])];
      if (!val) throw Error(ErrorCode::kInternal, "back substitution reached an unsolved node");
      terms.emplace_back(&*val, w);
    }
    value[static_cast<std::size_t>(nodes[static_cast<std::size_t>(it->u)])] = combine(terms);
  }
}

}  // namespace

PotentialField limit_potential(const Conductance& g, const BondIndex& index, const std::vector<int>& target_of,
                               int targets, const PotentialOptions& options) {
  const std::size_t n = g.size();
  if (target_of.size() != n) throw Error(ErrorCode::kInternal, "target labelling has the wrong size");
  Dsu dsu(n);
  PotentialField field;
  field.targets_ = targets;
  field.value_.resize(n);
  for (std::size_t x = 0; x < n; ++x)
    if (target_of[x] >= 0) field.value_[x] = SparseVector{{target_of[x], Rational(1)}};

  const auto queries_done = [&] {
    if (options.queries.empty()) return false;
    for (int q : options.queries)
      if (!field.value_[static_cast<std::size_t>(dsu.find(q))]) return false;
    return true;
  };

  const auto& bonds = g.bonds();
  if (!queries_done()) {
    for (std::size_t k = 0; k < index.group_count(); ++k) {
      if (options.stop_after_order && index.orders()[k] > *options.stop_after_order) break;

      struct Edge {
        int a, b;
        const Rational* c;
      };
      std::vector<Edge> edges;
      std::vector<int> nodes;
      for (int bi : index.group(k)) {
        const auto& bond = bonds[static_cast<std::size_t>(bi)];
        int ra = dsu.find(bond.a);
        int rb = dsu.find(bond.b);
        if (ra == rb) continue;
        if (field.value_[static_cast<std::size_t>(ra)] && field.value_[static_cast<std::size_t>(rb)]) continue;
        edges.push_back({ra, rb, &bond.g.coeff()});
        nodes.push_back(ra);
        nodes.push_back(rb);
      }
      if (edges.empty()) continue;
      std::sort(nodes.begin(), nodes.end());
      nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
      const auto local = [&](int r) {
        return static_cast<int>(std::lower_bound(nodes.begin(), nodes.end(), r) - nodes.begin());
      };

      std::vector<Row> adj(nodes.size());
      std::vector<char> is_free(nodes.size());
      for (std::size_t i = 0; i < nodes.size(); ++i)
        is_free[i] = field.value_[static_cast<std::size_t>(nodes[i])] ? 0 : 1;
      Dsu comp(nodes.size());
      for (const auto& e : edges) {
        const int la = local(e.a);
        const int lb = local(e.b);
        adj[static_cast<std::size_t>(la)][lb] += *e.c;
        adj[static_cast<std::size_t>(lb)][la] += *e.c;
        if (is_free[static_cast<std::size_t>(la)] && is_free[static_cast<std::size_t>(lb)]) {
          const int x = comp.find(la);
          const int y = comp.find(lb);
          if (x != y) comp.parent[static_cast<std::size_t>(std::max(x, y))] = std::min(x, y);
        }
      }

      std::map<int, std::vector<int>> components;
      for (std::size_t i = 0; i < nodes.size(); ++i)
        if (is_free[i]) components[comp.find(static_cast<int>(i))].push_back(static_cast<int>(i));

      for (auto& [root, members] : components) {
        bool bounded = false;
        for (int u : members) {
          for (const auto& [v, w] : adj[static_cast<std::size_t>(u)])
            if (!is_free[static_cast<std::size_t>(v)]) {
              bounded = true;
              break;
            }
          if (bounded) break;
        }
        if (!bounded) {
          const int keep = nodes[static_cast<std::size_t>(members.front())];
          for (int u : members) dsu.parent[static_cast<std::size_t>(nodes[static_cast<std::size_t>(u)])] = keep;
        } else {
          solve_component(members, adj, is_free, nodes, field.value_);
        }
      }
      if (queries_done()) break;
    }
  }

  field.rep_.resize(n);
  for (std::size_t x = 0; x < n; ++x) field.rep_[x] = dsu.find(static_cast<int>(x));
  return field;
}

}  // namespace metachain
