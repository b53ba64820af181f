#include "slt/parallel.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

namespace slt {

namespace {
std::atomic<int> g_threads{0};
}

void set_thread_count(int n) { g_threads.store(n < 0 ? 0 : n); }

int thread_count() {
  int n = g_threads.load();
  if (n <= 0) {
    n = static_cast<int>(std::thread::hardware_concurrency());
    if (n <= 0) n = 1;
  }
  return n;
}

std::size_t block_count(std::size_t total, std::size_t block_size) {
  if (block_size == 0) block_size = 1;
  return (total + block_size - 1) / block_size;
}

void parallel_blocks(std::size_t total, std::size_t block_size,
                     const std::function<void(std::size_t, std::size_t,
                                              std::size_t)>& fn) {
  if (total == 0) return;
  if (block_size == 0) block_size = 1;
  const std::size_t blocks = block_count(total, block_size);
  const int workers =
      static_cast<int>(std::min<std::size_t>(blocks, thread_count()));

  if (workers <= 1) {
    for (std::size_t b = 0; b < blocks; ++b) {
      const std::size_t lo = b * block_size;
      const std::size_t hi = std::min(total, lo + block_size);
      fn(b, lo, hi);
    }
    return;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;

  auto work = [&] {
    for (;;) {
      const std::size_t b = next.fetch_add(1);
      if (b >= blocks) return;
      const std::size_t lo = b * block_size;
      const std::size_t hi = std::min(total, lo + block_size);
      try {
        fn(b, lo, hi);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

double pairwise_sum(std::span<const double> v) {
  const std::size_t n = v.size();
  if (n == 0) return 0.0;
  if (n <= 8) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(v.subspan(0, half)) + pairwise_sum(v.subspan(half));
}

}  // namespace slt
