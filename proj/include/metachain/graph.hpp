#pragma once

#include <cstddef>
#include <vector>

namespace metachain {

// Directed graph in compressed row form.
struct Digraph {
  std::vector<std::size_t> offsets;  // size n + 1
  std::vector<int> targets;

  std::size_t size() const noexcept { return offsets.empty() ? 0 : offsets.size() - 1; }
  static Digraph from_lists(const std::vector<std::vector<int>>& lists);
};

struct SccResult {
  std::vector<int> component;  // component id per vertex
  int count = 0;
};

// Iterative Tarjan.
SccResult strongly_connected_components(const Digraph& g);

// Members of every sink component of the condensation, each sorted, listed
// by smallest member.
std::vector<std::vector<int>> sink_components(const Digraph& g, const SccResult& scc);

}  // namespace metachain
