#include "metachain/graph.hpp"

#include <algorithm>

namespace metachain {

Digraph Digraph::from_lists(const std::vector<std::vector<int>>& lists) {
  Digraph g;
  g.offsets.assign(lists.size() + 1, 0);
  for (std::size_t i = 0; i < lists.size(); ++i) {
    g.targets.insert(g.targets.end(), lists[i].begin(), lists[i].end());
    g.offsets[i + 1] = g.targets.size();
  }
  return g;
}

SccResult strongly_connected_components(const Digraph& g) {
  const std::size_t n = g.size();
  SccResult res;
  res.component.assign(n, -1);
  std::vector<int> index(n, -1);
  std::vector<int> low(n, 0);
  std::vector<char> on_stack(n, 0);
  std::vector<int> stack;
  struct Frame {
    int v;
    std::size_t next;
  };
  std::vector<Frame> call;
  int counter = 0;

  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] >= 0) continue;
    call.push_back({static_cast<int>(root), g.offsets[root]});
    index[root] = low[root] = counter++;
    stack.push_back(static_cast<int>(root));
    on_stack[root] = 1;
    while (!call.empty()) {
      Frame& f = call.back();
      const auto v = static_cast<std::size_t>(f.v);
      if (f.next < g.offsets[v + 1]) {
        const auto w = static_cast<std::size_t>(g.targets[f.next++]);
        if (index[w] < 0) {
          index[w] = low[w] = counter++;
          stack.push_back(static_cast<int>(w));
          on_stack[w] = 1;
          call.push_back({static_cast<int>(w), g.offsets[w]});
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        int w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[static_cast<std::size_t>(w)] = 0;
          res.component[static_cast<std::size_t>(w)] = res.count;
        } while (w != f.v);
        ++res.count;
      }
      const int done = f.v;
      call.pop_back();
      if (!call.empty()) {
        const auto u = static_cast<std::size_t>(call.back().v);
        low[u] = std::min(low[u], low[static_cast<std::size_t>(done)]);
      }
    }
  }
  return res;
}

std::vector<std::vector<int>> sink_components(const Digraph& g, const SccResult& scc) {
  std::vector<char> sink(static_cast<std::size_t>(scc.count), 1);
  for (std::size_t v = 0; v < g.size(); ++v)
    for (std::size_t e = g.offsets[v]; e < g.offsets[v + 1]; ++e)
      if (scc.component[v] != scc.component[static_cast<std::size_t>(g.targets[e])])
        sink[static_cast<std::size_t>(scc.component[v])] = 0;
  std::vector<std::vector<int>> members(static_cast<std::size_t>(scc.count));
  for (std::size_t v = 0; v < g.size(); ++v)
    if (sink[static_cast<std::size_t>(scc.component[v])])
      members[static_cast<std::size_t>(scc.component[v])].push_back(static_cast<int>(v));
  std::vector<std::vector<int>> out;
  for (auto& m : members)
    if (!m.empty()) out.push_back(std::move(m));
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return out;
}

}  // namespace metachain
