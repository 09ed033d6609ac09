#pragma once

#include <cstdint>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace decaylab {

/// Evaluate f(i) for i in [0, count) into a dense array. The parallel path
/// assigns indices to threads but every slot is written independently, so
/// the result is bit-identical to the serial path; reductions downstream
/// always walk the array in index order.
template <class T, class F>
std::vector<T> map_indexed_as(std::int64_t count, bool parallel, F&& f) {
    std::vector<T> out(static_cast<std::size_t>(count));
#ifdef _OPENMP
    if (parallel) {
#pragma omp parallel for schedule(static)
        for (std::int64_t i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = f(i);
        return out;
    }
#else
    (void)parallel;
#endif
    for (std::int64_t i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = f(i);
    return out;
}

template <class F>
std::vector<double> map_indexed(std::int64_t count, bool parallel, F&& f) {
    return map_indexed_as<double>(count, parallel, std::forward<F>(f));
}

} // namespace decaylab
