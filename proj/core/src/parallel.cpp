#include "terraprop/parallel.hpp"

#include <algorithm>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "terraprop/error.hpp"

namespace terraprop {

std::string_view to_string(DataErrc code) noexcept {
  switch (code) {
    case DataErrc::io: return "io error";
    case DataErrc::truncated_file: return "truncated file";
    case DataErrc::payload_length_mismatch: return "payload length mismatch";
    case DataErrc::unknown_dtype: return "unknown dtype";
    case DataErrc::missing_column: return "missing column";
    case DataErrc::malformed: return "malformed input";
    case DataErrc::shape_mismatch: return "shape mismatch";
    case DataErrc::invalid_value: return "invalid value";
    case DataErrc::no_scored_pixels: return "no scored pixels";
  }
  return "data error";
}

int hardware_threads() noexcept {
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, int threads,
                  const std::function<void(std::size_t, std::size_t)>& body) {
  if (count == 0) return;
  const std::size_t workers =
      std::min<std::size_t>(count, static_cast<std::size_t>(std::max(threads, 1)));
  if (workers == 1) {
    body(0, count);
    return;
  }
  const std::size_t chunk = (count + workers - 1) / workers;
  std::mutex guard;
  std::exception_ptr failure;
  auto run = [&](std::size_t begin, std::size_t end) {
    try {
      body(begin, end);
    } catch (...) {
      const std::lock_guard lock(guard);
      if (!failure) failure = std::current_exception();
    }
  };
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers - 1);
    for (std::size_t w = 1; w < workers; ++w) {
      const std::size_t begin = w * chunk;
      const std::size_t end = std::min(count, begin + chunk);
      if (begin >= end) break;
      pool.emplace_back(run, begin, end);
    }
    run(0, std::min(count, chunk));
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace terraprop
