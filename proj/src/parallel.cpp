#include "ruelle/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace ruelle {

namespace {

int initial_thread_count() {
  if (const char* env = std::getenv("RUELLE_THREADS")) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
  return 1;
}

std::atomic<int>& thread_setting() {
  static std::atomic<int> n{initial_thread_count()};
  return n;
}

constexpr std::size_t kBlock = 4096;

}  // namespace

int thread_count() { return thread_setting().load(); }

void set_thread_count(int n) { thread_setting().store(std::max(1, n)); }

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(thread_count()), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto run = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = n;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (std::size_t t = 1; t < workers; ++t) pool.emplace_back(run);
  run();
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

Complex ordered_sum(std::size_t n, const std::function<Complex(std::size_t)>& term,
                    double* abs_total) {
  std::size_t blocks = (n + kBlock - 1) / kBlock;
  std::vector<Complex> partial(blocks);
  std::vector<double> magnitude(blocks, 0.0);
  parallel_for(blocks, [&](std::size_t b) {
    CompensatedSum s;
    double m = 0.0;
    std::size_t end = std::min(n, (b + 1) * kBlock);
    for (std::size_t i = b * kBlock; i < end; ++i) {
      Complex x = term(i);
      s.add(x);
      m += std::abs(x);
    }
    partial[b] = s.value();
    magnitude[b] = m;
  });
  CompensatedSum total;
  double m = 0.0;
  for (std::size_t b = 0; b < blocks; ++b) {
    total.add(partial[b]);
    m += magnitude[b];
  }
  if (abs_total) *abs_total = m;
  return total.value();
}

}  // namespace ruelle
