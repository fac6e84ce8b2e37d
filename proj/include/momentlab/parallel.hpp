#pragma once

// Index-parallel map with deterministic assembly: results come back in index
// order regardless of which worker computed them.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <optional>
#include <thread>
#include <type_traits>
#include <vector>

namespace momentlab {

namespace detail {
inline std::atomic<unsigned>& max_threads_slot() {
  static std::atomic<unsigned> slot{0};
  return slot;
}
}  // namespace detail

/// Caps worker threads; 0 means "hardware concurrency".
inline void set_max_threads(unsigned n) { detail::max_threads_slot().store(n); }

inline unsigned max_threads() {
  const unsigned cap = detail::max_threads_slot().load();
  const unsigned hw = std::max(1U, std::thread::hardware_concurrency());
  return cap == 0 ? hw : std::min(cap, hw);
}

template <class Fn>
auto parallel_map(std::size_t count, Fn&& fn) {
  using Result = std::invoke_result_t<Fn&, std::size_t>;
  std::vector<std::optional<Result>> slots(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
      try {
        slots[i].emplace(fn(i));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };

  const std::size_t workers = std::min<std::size_t>(max_threads(), count);
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers - 1);
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
  }

  // Lowest failing index wins so error reporting is reproducible too.
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<Result> out;
  out.reserve(count);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace momentlab
