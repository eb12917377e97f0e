#pragma once

#include <functional>

namespace lensremap::detail {

/// Runs body(row) for every row in [0, rows), split into contiguous blocks
/// across at most `threads` workers (0 = hardware concurrency). The first
/// exception thrown by the lowest-numbered block is rethrown.
void parallel_rows(int rows, unsigned threads, const std::function<void(int)>& body);

}  // namespace lensremap::detail
