#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace slicedot {

// Worker count used by the slice loops. Defaults to SLICEDOT_THREADS when
// set, else 1. A value set through set_thread_count overrides the variable.
[[nodiscard]] int thread_count();
void set_thread_count(int n);

// Calls body(i) for i in [0, n). Work is split into contiguous chunks; body
// must only write to slots owned by index i, so results do not depend on
// the number of workers.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

// Pairwise summation in index order; the tree shape depends only on size.
[[nodiscard]] double pairwise_sum(std::span<const double> xs);

}  // namespace slicedot
