#pragma once

// Execution policy shared by the Monte Carlo kernels and the grid
// evaluators.  Every parallel kernel in the library has a serial twin
// producing bit-identical results; tests pin the two against each other
// and the bench tool compares their throughput.

#include <cstdint>
#include <functional>

namespace jmes {

enum class Exec { Serial, Parallel };

namespace parallel {

// Number of worker threads the Parallel policy would use (1 without OpenMP).
int max_threads();

// Invoke fn(block_index) for block_index in [0, n_blocks).  Blocks must be
// independent; results must be written to per-block slots so that the
// outcome does not depend on scheduling.
void for_each_block(std::int64_t n_blocks, Exec exec,
                    const std::function<void(std::int64_t)>& fn);

}  // namespace parallel
}  // namespace jmes
