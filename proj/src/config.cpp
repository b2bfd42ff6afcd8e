#include "metachain/config.hpp"

#include <cstdlib>
#include <string>

#include <omp.h>

namespace metachain {

int configure_threads_from_env() {
  if (const char* env = std::getenv("METACHAIN_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) omp_set_num_threads(n);
    } catch (const std::exception&) {
    }
  }
  return omp_get_max_threads();
}

}  // namespace metachain
