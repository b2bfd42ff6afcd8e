#include "metachain/hierarchy.hpp"

#include <algorithm>

#include "metachain/errors.hpp"
#include "metachain/graph.hpp"
#include "metachain/parallel.hpp"

namespace metachain {

namespace {

HarmonicMethod pick_method(const Chain& chain, const EngineOptions& o) {
  switch (o.harmonic) {
    case HarmonicChoice::kTrace: return HarmonicMethod::kTrace;
    case HarmonicChoice::kNetwork: return HarmonicMethod::kNetwork;
    case HarmonicChoice::kAuto: break;
  }
  return chain.size() <= o.trace_state_limit ? HarmonicMethod::kTrace : HarmonicMethod::kNetwork;
}

ScaledQuantity mass(const StationaryMeasure& mu, const std::vector<int>& set) {
  Weight m;
  for (int x : set) m = add(m, Weight(mu.mu[static_cast<std::size_t>(x)]));
  return *m;
}

std::vector<int> complement_of(const std::vector<std::vector<int>>& sets, std::size_t skip) {
  std::vector<int> out;
  for (std::size_t j = 0; j < sets.size(); ++j)
    if (j != skip) out.insert(out.end(), sets[j].begin(), sets[j].end());
  std::sort(out.begin(), out.end());
  return out;
}

[[noreturn]] void broken(const std::string& what) { throw Error(ErrorCode::kInternal, what); }

std::string set_label(const Chain& chain, const std::vector<int>& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size() && i < 8; ++i) out += (i ? "," : "") + chain.name(s[i]);
  if (s.size() > 8) out += ",...";
  return out + "}";
}

void check_equal_magnitude(const Analysis& a, const std::vector<int>& set, const char* what) {
  for (int x : set)
    if (a.mu.mu[static_cast<std::size_t>(x)].order() != a.mu.mu[static_cast<std::size_t>(set.front())].order())
      broken(std::string(what) + ": states of " + set_label(a.chain, set) + " have measures of different magnitude");
}

void check_level(const Analysis& a, const HierarchyLevel& lv, const HierarchyLevel* prev) {
  const std::size_t n = a.chain.size();
  const std::size_t nu = lv.metastates.size();
  std::vector<int> seen(n, 0);
  for (const auto& m : lv.metastates)
    for (int x : m) ++seen[static_cast<std::size_t>(x)];
  for (int x : lv.delta) ++seen[static_cast<std::size_t>(x)];
  for (std::size_t x = 0; x < n; ++x)
    if (seen[x] != 1) broken("metastates and delta do not partition the state space at " + a.chain.name(static_cast<int>(x)));
  if (nu < 2) broken("a level needs at least two metastates");
  for (const auto& m : lv.metastates) check_equal_magnitude(a, m, "metastates of unequal magnitude");

  if (prev) {
    if (nu >= prev->metastates.size()) broken("the number of metastates did not decrease");
    for (std::size_t i = 0; i < nu; ++i) {
      std::vector<int> u;
      for (int j : lv.parents[i]) {
        const auto& pm = prev->metastates[static_cast<std::size_t>(j)];
        u.insert(u.end(), pm.begin(), pm.end());
      }
      std::sort(u.begin(), u.end());
      if (u != lv.metastates[i]) broken("metastate is not the union of its parents");
    }
    if (compare(lv.depths.theta, prev->depths.theta) != Magnitude::kSucc)
      broken("time scales are not strictly increasing");
  }

  const auto& d = lv.depths;
  const auto& r = lv.rates;
  for (std::size_t i = 0; i < nu; ++i) {
    Rational sum_p(0);
    Rational sum_r(0);
    for (std::size_t j = 0; j < nu; ++j) {
      sum_p += r.p[i][j];
      sum_r += r.rates[i][j];
      if (sgn(r.rates[i][j]) > 0 && compare(d.measure[j], d.measure[i]) == Magnitude::kPrec)
        broken("rate toward a metastate of lower measure");
    }
    if (sum_p != 1) broken("hitting probabilities out of " + set_label(a.chain, lv.metastates[i]) + " do not sum to 1");
    const bool active = std::binary_search(d.active.begin(), d.active.end(), static_cast<int>(i));
    if ((sgn(sum_r) > 0) != active) broken("exit rate sign does not match the active set");
  }
}

}  // namespace

Analysis::Analysis(const Chain& c, const EngineOptions& o)
    : chain(c),
      options(o),
      method(pick_method(c, o)),
      mu(stationary_measure(c, o.reference.value_or(0), o.tree_order)),
      g(conductances(c, mu)),
      index(g) {}

Partition level1_leaves(const Analysis& a) {
  const auto& chain = a.chain;
  Digraph g;
  g.offsets.assign(chain.size() + 1, 0);
  for (int x = 0; x < static_cast<int>(chain.size()); ++x) {
    for (const auto& t : chain.out(x))
      if (sgn(t.rate.order()) == 0) g.targets.push_back(t.to);
    g.offsets[static_cast<std::size_t>(x) + 1] = g.targets.size();
  }
  const auto scc = strongly_connected_components(g);
  Partition p;
  p.metastates = sink_components(g, scc);
  std::vector<char> in(chain.size(), 0);
  for (const auto& m : p.metastates) {
    check_equal_magnitude(a, m, "leaf");
    for (int x : m) in[static_cast<std::size_t>(x)] = 1;
  }
  for (std::size_t x = 0; x < in.size(); ++x)
    if (!in[x]) p.delta.push_back(static_cast<int>(x));
  return p;
}

LevelDepths level_depths(const Analysis& a, const std::vector<std::vector<int>>& metastates,
                         const std::optional<ScaledQuantity>& previous_theta) {
  const std::size_t nu = metastates.size();
  std::vector<std::optional<ScaledQuantity>> cap(nu);
  for_each_index(nu, a.options.execution, [&](std::size_t i) {
    const auto rest = complement_of(metastates, i);
    cap[i] = sharp_capacity(a.chain, a.mu, a.g, a.index, metastates[i], rest, a.method).value;
  });

  LevelDepths d;
  for (std::size_t i = 0; i < nu; ++i) {
    d.measure.push_back(mass(a.mu, metastates[i]));
    d.capacity.push_back(*cap[i]);
    d.depths.push_back(div(d.measure.back(), *cap[i]));
    if (sgn(d.depths.back().order()) >= 0)
      throw Error(ErrorCode::kDepthNotDiverging, "depth of " + set_label(a.chain, metastates[i]) + " is " +
                                                     to_label(d.depths.back()) + ", which does not diverge");
    if (previous_theta && compare(d.depths.back(), *previous_theta) != Magnitude::kSucc)
      broken("depth of " + set_label(a.chain, metastates[i]) + " does not exceed the previous time scale");
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < nu; ++i)
    if (asymptotic_cmp(d.depths[i], d.depths[best]) < 0) best = i;
  d.theta = d.depths[best];
  for (std::size_t i = 0; i < nu; ++i) {
    const auto lr = limit_ratio(d.theta, d.depths[i]);
    if (lr.infinite) broken("time scale exceeds a depth");
    d.lambda.push_back(lr.value);
    if (compare(d.depths[i], d.theta) == Magnitude::kAsympEquiv) d.active.push_back(static_cast<int>(i));
  }
  return d;
}

LevelRates level_rates(const Analysis& a, const std::vector<std::vector<int>>& metastates, const LevelDepths& d) {
  const std::size_t nu = metastates.size();
  const std::size_t n = a.chain.size();
  LevelRates r;
  r.p.assign(nu, std::vector<Rational>(nu));
  r.rates.assign(nu, std::vector<Rational>(nu));

  for_each_index(nu, a.options.execution, [&](std::size_t i) {
    std::vector<std::vector<int>> targets;
    std::vector<std::size_t> column;
    for (std::size_t j = 0; j < nu; ++j)
      if (j != i) {
        targets.push_back(metastates[j]);
        column.push_back(j);
      }
    const auto& starts = metastates[i];
    std::vector<std::vector<Rational>> dist;
    if (a.method == HarmonicMethod::kTrace) {
      dist = hitting_distribution_by_trace(a.chain, a.mu, targets, starts);
    } else {
      std::vector<int> target_of(n, -1);
      for (std::size_t k = 0; k < targets.size(); ++k)
        for (int x : targets[k]) target_of[static_cast<std::size_t>(x)] = static_cast<int>(k);
      PotentialOptions opt;
      opt.queries = starts;
      const auto field = limit_potential(a.g, a.index, target_of, static_cast<int>(targets.size()), opt);
      for (int x : starts) dist.push_back(field.dense(x));
    }
    for (std::size_t s = 1; s < starts.size(); ++s)
      if (dist[s] != dist[0])
        throw Error(ErrorCode::kStartDependentHitting, "exit distribution of " + set_label(a.chain, starts) +
                                                           " differs between " + a.chain.name(starts[0]) + " and " +
                                                           a.chain.name(starts[s]));
    for (std::size_t k = 0; k < column.size(); ++k) {
      r.p[i][column[k]] = dist[0][k];
      r.rates[i][column[k]] = d.lambda[i] * dist[0][k];
    }
  });
  return r;
}

std::optional<Rational> scaled_rate_limit(const ScaledQuantity& theta, const Weight& r) {
  if (!r) return Rational(0);
  const auto prod = mul(theta, *r);
  const int s = sgn(prod.order());
  if (s > 0) return Rational(0);
  if (s < 0) return std::nullopt;
  return prod.coeff();
}

void cross_check_level(const Analysis& a, const HierarchyLevel& lv) {
  const auto& ms = lv.metastates;
  std::vector<int> F = complement_of(ms, ms.size());
  const TraceChain t = F.size() == a.chain.size()
                           ? TraceChain(a.chain, a.mu)
                           : trace_onto(a.chain, a.mu, F, a.options.elimination, a.options.verify_elimination_order);
  const auto& theta = lv.depths.theta;
  for (std::size_t i = 0; i < ms.size(); ++i) {
    for (std::size_t j = 0; j < ms.size(); ++j) {
      if (i == j) continue;
      const auto lim = scaled_rate_limit(theta, average_rate(t, ms[i], ms[j]));
      if (!lim || *lim != lv.rates.rates[i][j])
        throw Error(ErrorCode::kCrossCheckMismatch,
                    "level " + std::to_string(lv.level) + ": rate " + set_label(a.chain, ms[i]) + " -> " +
                        set_label(a.chain, ms[j]) + " is " + format_rational(lv.rates.rates[i][j]) +
                        " but the trace gives " + (lim ? format_rational(*lim) : std::string("infinity")));
    }
    const Weight out = average_rate(t, ms[i], complement_of(ms, i));
    const auto bound = div(theta, lv.depths.depths[i]);
    if (sgn(bound.order()) < 0 || (out && compare(mul(theta, *out), bound) == Magnitude::kSucc))
      throw Error(ErrorCode::kCrossCheckMismatch,
                  "exit rate of " + set_label(a.chain, ms[i]) + " exceeds the capacity bound");
  }
}

Partition next_level(const Analysis& a, const HierarchyLevel& lv) {
  const std::size_t nu = lv.metastates.size();
  std::vector<std::vector<int>> lists(nu);
  for (std::size_t i = 0; i < nu; ++i)
    for (std::size_t j = 0; j < nu; ++j)
      if (sgn(lv.rates.rates[i][j]) > 0) lists[i].push_back(static_cast<int>(j));
  const Digraph g = Digraph::from_lists(lists);
  const auto scc = strongly_connected_components(g);
  const auto sinks = sink_components(g, scc);

  Partition p;
  p.delta = lv.delta;
  std::vector<char> used(nu, 0);
  for (const auto& members : sinks) {
    std::vector<int> u;
    for (int j : members) {
      used[static_cast<std::size_t>(j)] = 1;
      const auto& m = lv.metastates[static_cast<std::size_t>(j)];
      u.insert(u.end(), m.begin(), m.end());
    }
    std::sort(u.begin(), u.end());
    check_equal_magnitude(a, u, "merged metastate");
    p.metastates.push_back(std::move(u));
    p.parents.push_back(members);
  }
  for (std::size_t j = 0; j < nu; ++j)
    if (!used[j]) p.delta.insert(p.delta.end(), lv.metastates[j].begin(), lv.metastates[j].end());
  std::sort(p.delta.begin(), p.delta.end());
  // Order by smallest state, parents follow.
  std::vector<std::size_t> perm(p.metastates.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  std::sort(perm.begin(), perm.end(),
            [&](std::size_t x, std::size_t y) { return p.metastates[x].front() < p.metastates[y].front(); });
  Partition sorted;
  sorted.delta = std::move(p.delta);
  for (auto k : perm) {
    sorted.metastates.push_back(std::move(p.metastates[k]));
    sorted.parents.push_back(std::move(p.parents[k]));
  }
  return sorted;
}

HierarchyReport full_hierarchy(const Analysis& a) {
  HierarchyReport rep;
  rep.fingerprint = fingerprint(a.chain);
  rep.anchor = a.mu.reference;
  rep.method = a.method;

  Partition part = level1_leaves(a);
  if (part.metastates.size() == 1) {
    rep.terminal = part.metastates.front();
    rep.note = "the order-0 jump graph has a single leaf; there is no metastable transition";
    return rep;
  }

  const bool can_cross_check = a.options.cross_check && a.chain.size() <= a.options.cross_check_state_limit;
  std::optional<ScaledQuantity> prev_theta;
  while (part.metastates.size() >= 2) {
    HierarchyLevel lv;
    lv.level = static_cast<int>(rep.levels.size()) + 1;
    lv.metastates = std::move(part.metastates);
    lv.delta = std::move(part.delta);
    lv.parents = std::move(part.parents);
    lv.depths = level_depths(a, lv.metastates, prev_theta);
    lv.rates = level_rates(a, lv.metastates, lv.depths);
    check_level(a, lv, rep.levels.empty() ? nullptr : &rep.levels.back());
    if (can_cross_check) {
      cross_check_level(a, lv);
      lv.cross_check = CrossCheck::kExact;
    } else {
      lv.cross_check = a.options.cross_check ? CrossCheck::kSkipped : CrossCheck::kDisabled;
    }
    prev_theta = lv.depths.theta;
    part = next_level(a, lv);
    rep.levels.push_back(std::move(lv));
  }
  rep.depth_count = static_cast<int>(rep.levels.size());
  rep.terminal = part.metastates.front();
  return rep;
}

HierarchyReport full_hierarchy(const Chain& chain, const EngineOptions& options) {
  const Analysis a(chain, options);
  return full_hierarchy(a);
}

}  // namespace metachain
