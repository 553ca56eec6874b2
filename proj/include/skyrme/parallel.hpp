#pragma once

#include <cstddef>
#include <type_traits>
#include <vector>

namespace skyrme {

/// Worker count: SKYRME_THREADS if set, else hardware concurrency.
unsigned thread_count();

/// Runs body(begin, end) over contiguous chunks of [0, n).
template <class Body>
void parallel_chunks(std::size_t n, Body&& body);

/// Runs f(i) for every i in [0, n). Each i is independent.
template <class F>
void parallel_for(std::size_t n, F&& f)
{
    parallel_chunks(n, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) f(i);
    });
}

/// Pairwise sum of x[0..n) with a fixed recursion order (bit-reproducible).
double pairwise_sum(const double* x, std::size_t n);

inline double pairwise_sum(const std::vector<double>& x) { return pairwise_sum(x.data(), x.size()); }

namespace detail {
void run_chunks(std::size_t n, void (*call)(void*, std::size_t, std::size_t), void* ctx);
}

template <class Body>
void parallel_chunks(std::size_t n, Body&& body)
{
    using B = std::remove_reference_t<Body>;
    detail::run_chunks(
        n, [](void* ctx, std::size_t b, std::size_t e) { (*static_cast<B*>(ctx))(b, e); },
        const_cast<void*>(static_cast<const void*>(&body)));
}

}  // namespace skyrme
