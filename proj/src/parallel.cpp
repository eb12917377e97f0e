#include "parallel.hpp"

#include <algorithm>
#include <exception>
#include <thread>
#include <vector>

namespace lensremap::detail {

void parallel_rows(int rows, unsigned threads, const std::function<void(int)>& body) {
  if (rows <= 0) return;
  unsigned workers = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
  workers = std::min<unsigned>(workers, static_cast<unsigned>(rows));
  if (workers <= 1) {
    for (int r = 0; r < rows; ++r) body(r);
    return;
  }

  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const int block = (rows + static_cast<int>(workers) - 1) / static_cast<int>(workers);
  for (unsigned w = 0; w < workers; ++w) {
    const int begin = static_cast<int>(w) * block;
    const int end = std::min(rows, begin + block);
    pool.emplace_back([&, w, begin, end] {
      try {
        for (int r = begin; r < end; ++r) body(r);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  // Blocks are in row order, so the first stored error is the raster-first one.
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace lensremap::detail
