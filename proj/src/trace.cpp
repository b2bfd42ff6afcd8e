#include "metachain/trace.hpp"

#include <algorithm>
#include <set>

#include "metachain/errors.hpp"
#include "metachain/parallel.hpp"

namespace metachain {

TraceChain::TraceChain(const Chain& chain, const StationaryMeasure& mu)
    : kept_(chain.size(), 1), kept_count_(chain.size()), out_(chain.size()), mu_(mu.mu) {
  for (int x = 0; x < static_cast<int>(chain.size()); ++x) {
    auto& row = out_[static_cast<std::size_t>(x)];
    for (const auto& t : chain.out(x)) row.emplace_hint(row.end(), t.to, t.rate);
  }
}

std::vector<int> TraceChain::kept_states() const {
  std::vector<int> v;
  v.reserve(kept_count_);
  for (std::size_t x = 0; x < kept_.size(); ++x)
    if (kept_[x]) v.push_back(static_cast<int>(x));
  return v;
}

Weight TraceChain::rate(int x, int y) const {
  const auto& row = out_[static_cast<std::size_t>(x)];
  auto it = row.find(y);
  if (it == row.end()) return std::nullopt;
  return it->second;
}

void TraceChain::eliminate(int w) {
  if (w < 0 || static_cast<std::size_t>(w) >= kept_.size() || !kept(w))
    throw Error(ErrorCode::kStateNotKept, "state index " + std::to_string(w) + " is not kept");
  if (kept_count_ < 3) throw Error(ErrorCode::kTooFewStates, "elimination needs at least three kept states");
  auto& from_w = out_[static_cast<std::size_t>(w)];
  Weight total;
  for (const auto& [y, r] : from_w) total = add(total, Weight(r));
  if (!total) throw Error(ErrorCode::kInternal, "state with no outgoing rate in trace");
  for (const auto& [x, unused] : from_w) {
    auto& row = out_[static_cast<std::size_t>(x)];
    auto it = row.find(w);
    if (it == row.end()) throw Error(ErrorCode::kInternal, "trace support lost its symmetry");
    const ScaledQuantity rxw = it->second;
    row.erase(it);
    const ScaledQuantity scale = div(rxw, *total);
    for (const auto& [y, rwy] : from_w) {
      if (y == x) continue;
      ScaledQuantity inc = mul(scale, rwy);
      auto [pos, inserted] = row.try_emplace(y, inc);
      if (!inserted) pos->second = add(pos->second, inc);
    }
  }
  from_w.clear();
  kept_[static_cast<std::size_t>(w)] = 0;
  --kept_count_;
}

TraceChain eliminate_state(TraceChain t, int w) {
  t.eliminate(w);
  return t;
}

namespace {

std::vector<char> membership(std::size_t n, const std::vector<int>& F) {
  std::vector<char> in(n, 0);
  for (int x : F) {
    if (x < 0 || static_cast<std::size_t>(x) >= n) throw Error(ErrorCode::kUnknownState, "state index out of range");
    in[static_cast<std::size_t>(x)] = 1;
  }
  return in;
}

// Like trace_onto but tolerates F = E.
TraceChain keep_only(const Chain& chain, const StationaryMeasure& mu, const std::vector<int>& F) {
  TraceChain t(chain, mu);
  auto in = membership(chain.size(), F);
  for (std::size_t x = 0; x < in.size(); ++x)
    if (!in[x]) t.eliminate(static_cast<int>(x));
  return t;
}

}  // namespace

TraceChain trace_onto(const Chain& chain, const StationaryMeasure& mu, const std::vector<int>& F,
                      const std::vector<int>& sequence) {
  if (F.empty()) throw Error(ErrorCode::kEmptySubset, "cannot trace onto an empty set");
  auto in = membership(chain.size(), F);
  const auto kept = static_cast<std::size_t>(std::count(in.begin(), in.end(), 1));
  if (kept == chain.size()) throw Error(ErrorCode::kFullSet, "trace onto the whole state space");
  std::vector<char> listed(chain.size(), 0);
  for (int w : sequence) {
    if (w < 0 || static_cast<std::size_t>(w) >= chain.size() || in[static_cast<std::size_t>(w)] ||
        listed[static_cast<std::size_t>(w)])
      throw Error(ErrorCode::kStateNotKept, "elimination sequence must list each state outside F once");
    listed[static_cast<std::size_t>(w)] = 1;
  }
  if (sequence.size() + kept != chain.size())
    throw Error(ErrorCode::kStateNotKept, "elimination sequence must cover every state outside F");
  TraceChain t(chain, mu);
  for (int w : sequence) t.eliminate(w);
  return t;
}

namespace {

TraceChain trace_min_degree(const Chain& chain, const StationaryMeasure& mu, const std::vector<char>& in) {
  TraceChain t(chain, mu);
  std::set<std::pair<std::size_t, int>> queue;
  std::vector<std::size_t> degree(chain.size(), 0);
  for (std::size_t x = 0; x < in.size(); ++x)
    if (!in[x]) {
      degree[x] = t.out(static_cast<int>(x)).size();
      queue.emplace(degree[x], static_cast<int>(x));
    }
  while (!queue.empty()) {
    const int w = queue.begin()->second;
    queue.erase(queue.begin());
    std::vector<int> touched;
    for (const auto& [y, unused] : t.out(w)) touched.push_back(y);
    t.eliminate(w);
    for (int y : touched) {
      const auto uy = static_cast<std::size_t>(y);
      if (in[uy]) continue;
      queue.erase({degree[uy], y});
      degree[uy] = t.out(y).size();
      queue.emplace(degree[uy], y);
    }
  }
  return t;
}

}  // namespace

TraceChain trace_onto(const Chain& chain, const StationaryMeasure& mu, const std::vector<int>& F,
                      EliminationOrder order, bool verify_order) {
  if (F.empty()) throw Error(ErrorCode::kEmptySubset, "cannot trace onto an empty set");
  auto in = membership(chain.size(), F);
  std::vector<int> seq;
  for (std::size_t x = 0; x < in.size(); ++x)
    if (!in[x]) seq.push_back(static_cast<int>(x));
  if (order == EliminationOrder::kDescending) std::reverse(seq.begin(), seq.end());
  TraceChain t = order == EliminationOrder::kMinDegree
                     ? (seq.empty() ? trace_onto(chain, mu, F, seq) : trace_min_degree(chain, mu, in))
                     : trace_onto(chain, mu, F, seq);
  if (verify_order) {
    std::reverse(seq.begin(), seq.end());
    if (!(trace_onto(chain, mu, F, seq) == t))
      throw Error(ErrorCode::kInternal, "trace depends on the elimination order");
  }
  return t;
}

Weight average_rate(const TraceChain& t, const std::vector<int>& A, const std::vector<int>& B) {
  if (A.empty() || B.empty()) throw Error(ErrorCode::kEmptySubset, "average rate needs nonempty sets");
  std::vector<char> inB(t.universe(), 0);
  for (int y : B) {
    if (!t.kept(y)) throw Error(ErrorCode::kStateNotKept, "state of B is not kept");
    inB[static_cast<std::size_t>(y)] = 1;
  }
  Weight massA;
  Weight flow;
  for (int x : A) {
    if (!t.kept(x)) throw Error(ErrorCode::kStateNotKept, "state of A is not kept");
    if (inB[static_cast<std::size_t>(x)]) throw Error(ErrorCode::kOverlappingSets, "A and B intersect");
    massA = add(massA, Weight(t.mu(x)));
    Weight out;
    for (const auto& [y, r] : t.out(x))
      if (inB[static_cast<std::size_t>(y)]) out = add(out, Weight(r));
    flow = add(flow, mul(Weight(t.mu(x)), out));
  }
  if (!flow) return std::nullopt;
  return div(*flow, *massA);
}

std::vector<int> label_sets(std::size_t n, const std::vector<std::vector<int>>& sets) {
  std::vector<int> owner(n, -1);
  for (std::size_t k = 0; k < sets.size(); ++k) {
    if (sets[k].empty()) throw Error(ErrorCode::kEmptySubset, "target set " + std::to_string(k) + " is empty");
    for (int x : sets[k]) {
      if (x < 0 || static_cast<std::size_t>(x) >= n) throw Error(ErrorCode::kUnknownState, "state index out of range");
      if (owner[static_cast<std::size_t>(x)] != -1 && owner[static_cast<std::size_t>(x)] != static_cast<int>(k))
        throw Error(ErrorCode::kOverlappingSets, "target sets intersect at state index " + std::to_string(x));
      owner[static_cast<std::size_t>(x)] = static_cast<int>(k);
    }
  }
  return owner;
}

std::vector<std::vector<Rational>> hitting_distribution_by_trace(const Chain& chain, const StationaryMeasure& mu,
                                                                 const std::vector<std::vector<int>>& targets,
                                                                 const std::vector<int>& queries, Execution exec) {
  const auto owner = label_sets(chain.size(), targets);
  const std::size_t k = targets.size();
  std::vector<int> base;
  for (std::size_t x = 0; x < owner.size(); ++x)
    if (owner[x] >= 0) base.push_back(static_cast<int>(x));

  std::vector<std::vector<Rational>> result(queries.size(), std::vector<Rational>(k));
  const auto solve = [&](std::size_t q) {
    const int x = queries[q];
    auto& row = result[q];
    if (owner[static_cast<std::size_t>(x)] >= 0) {
      row[static_cast<std::size_t>(owner[static_cast<std::size_t>(x)])] = 1;
      return;
    }
    std::vector<int> F = base;
    F.insert(std::upper_bound(F.begin(), F.end(), x), x);
    const TraceChain t = keep_only(chain, mu, F);
    Weight total;
    std::vector<Weight> into(k);
    for (const auto& [y, r] : t.out(x)) {
      total = add(total, Weight(r));
      const int o = owner[static_cast<std::size_t>(y)];
      into[static_cast<std::size_t>(o)] = add(into[static_cast<std::size_t>(o)], Weight(r));
    }
    if (!total) throw Error(ErrorCode::kInternal, "isolated state in trace");
    for (std::size_t j = 0; j < k; ++j)
      if (into[j]) row[j] = limit_ratio(*into[j], *total).value;
  };

  for_each_index(queries.size(), exec, solve);
  return result;
}

HittingLimit hitting_limit(const Chain& chain, const StationaryMeasure& mu, const std::vector<int>& A,
                           const std::vector<int>& B, Execution exec) {
  std::vector<int> all(chain.size());
  for (std::size_t x = 0; x < all.size(); ++x) all[x] = static_cast<int>(x);
  auto d = hitting_distribution_by_trace(chain, mu, {A, B}, all, exec);
  HittingLimit h;
  h.f.reserve(all.size());
  for (auto& row : d) h.f.push_back(std::move(row[0]));
  return h;
}

}  // namespace metachain
