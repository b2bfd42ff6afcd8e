#pragma once

namespace metachain {

#ifdef METACHAIN_DEBUG_CHECKS
inline constexpr bool kDebugChecksDefault = true;
#else
inline constexpr bool kDebugChecksDefault = false;
#endif

// Applies METACHAIN_THREADS (if set and positive) to the OpenMP runtime and
// returns the effective thread cap.
int configure_threads_from_env();

}  // namespace metachain
