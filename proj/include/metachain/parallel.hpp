#pragma once

#include <cstddef>
#include <exception>
#include <vector>

#include "metachain/trace.hpp"

namespace metachain {

// Runs body(i) for i in [0, n). In parallel mode the first failure by index
// is rethrown after the loop, so errors are reported deterministically.
template <class Body>
void for_each_index(std::size_t n, Execution exec, Body&& body) {
  if (exec == Execution::kSerial || n < 2) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> failure(n);
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < n; ++i) {
    try {
      body(i);
    } catch (...) {
      failure[i] = std::current_exception();
    }
  }
  for (auto& f : failure)
    if (f) std::rethrow_exception(f);
}

}  // namespace metachain
