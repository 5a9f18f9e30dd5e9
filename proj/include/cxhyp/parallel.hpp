#pragma once

// Deterministic work splitting. Work is cut into fixed-size chunks whose
// boundaries do not depend on the worker count; per-chunk partial results are
// combined in chunk order, so serial and parallel runs produce identical
// floating-point output. CXHYP_THREADS caps the worker count.

#include <cstddef>
#include <functional>
#include <vector>

namespace cxhyp {

std::size_t worker_count();

// Runs fn(chunk_index) for chunk_index in [0, chunk_count), distributed over
// workers. fn must not touch shared mutable state except its own slot.
void parallel_chunks(std::size_t chunk_count, const std::function<void(std::size_t)>& fn);

inline constexpr std::size_t kDefaultChunk = 1 << 14;

// Sum of term(i) for i in [0,n) with deterministic chunked accumulation.
template <class F>
double deterministic_sum(std::size_t n, F&& term, std::size_t chunk_size = kDefaultChunk) {
    if (n == 0) return 0.0;
    const std::size_t chunks = (n + chunk_size - 1) / chunk_size;
    std::vector<double> partial(chunks, 0.0);
    parallel_chunks(chunks, [&](std::size_t c) {
        const std::size_t lo = c * chunk_size;
        const std::size_t hi = lo + chunk_size < n ? lo + chunk_size : n;
        double acc = 0.0;
        for (std::size_t i = lo; i < hi; ++i) acc += term(i);
        partial[c] = acc;
    });
    double total = 0.0;
    for (double p : partial) total += p;
    return total;
}

} // namespace cxhyp
