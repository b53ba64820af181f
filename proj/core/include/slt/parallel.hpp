#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace slt {

/// Process-wide worker count used by parallel loops. 0 means "auto"
/// (hardware concurrency). Set once by the CLI / test harness.
void set_thread_count(int n);
int thread_count();

// Runs fn(block_index, begin, end) for fixed-size blocks of [0, total).
// Block boundaries depend only on `total` and `block_size`, never on the
// worker count, so per-block results can be folded in block order to give
// reductions that are bit-identical for any number of threads.
void parallel_blocks(std::size_t total, std::size_t block_size,
                     const std::function<void(std::size_t, std::size_t,
                                              std::size_t)>& fn);

/// Number of blocks parallel_blocks will use for the given sizes.
std::size_t block_count(std::size_t total, std::size_t block_size);

/// Pairwise (tree) sum in index order; deterministic and more accurate
/// than a running sum.
double pairwise_sum(std::span<const double> v);

}  // namespace slt
