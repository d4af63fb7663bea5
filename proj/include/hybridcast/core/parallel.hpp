#pragma once

#include <cstddef>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace hybridcast::core {

/// Number of worker threads OpenMP would use (1 without OpenMP).
inline int hardware_threads() {
#if defined(_OPENMP)
    return omp_get_max_threads();
#else
    return 1;
#endif
}

/// Fixed chunk length for deterministic parallel reductions. Partial sums
/// are accumulated per chunk and combined in chunk order, so the result is
/// bitwise identical for any thread count, including the serial path.
inline constexpr std::size_t kReductionChunk = 256;

inline std::size_t chunk_count(std::size_t n) {
    return (n + kReductionChunk - 1) / kReductionChunk;
}

}  // namespace hybridcast::core
