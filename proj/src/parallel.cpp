#include "vns/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace vns {

int assembly_threads() {
  if (const char* env = std::getenv("VNS_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return n;
    } catch (const std::exception&) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_chunks(std::size_t n, int chunks,
                     const std::function<void(int, std::size_t, std::size_t)>& body) {
  chunks = std::max(1, chunks);
  if (chunks == 1 || n < 2) {
    body(0, 0, n);
    return;
  }
  const auto count = static_cast<std::size_t>(chunks);
  std::vector<std::thread> workers;
  std::vector<std::exception_ptr> errors(count);
  workers.reserve(count);
  for (std::size_t c = 0; c < count; ++c) {
    const std::size_t begin = n * c / count;
    const std::size_t end = n * (c + 1) / count;
    workers.emplace_back([&, c, begin, end] {
      try {
        body(static_cast<int>(c), begin, end);
      } catch (...) {
        errors[c] = std::current_exception();
      }
    });
  }
  for (auto& w : workers) w.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace vns
