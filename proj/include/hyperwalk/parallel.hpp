#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace hyperwalk {

/// Runs body(trial, acc) for trial in [0, trials) on `workers` threads. Each
/// worker owns a contiguous block of trials and its own accumulator; the
/// accumulators are merged in worker order with Accum::merge. With
/// integer-valued accumulators the result does not depend on `workers`.
template <class Accum, class Body>
Accum run_trials(std::uint64_t trials, unsigned workers, const Accum& init, Body body) {
  workers = std::max(1u, workers);
  if (trials < workers) workers = static_cast<unsigned>(std::max<std::uint64_t>(1, trials));
  std::vector<Accum> accs(workers, init);
  if (workers == 1) {
    for (std::uint64_t i = 0; i < trials; ++i) body(i, accs[0]);
    return accs[0];
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    const std::uint64_t lo = trials * w / workers;
    const std::uint64_t hi = trials * (w + 1) / workers;
    threads.emplace_back([&, w, lo, hi] {
      try {
        for (std::uint64_t i = lo; i < hi; ++i) body(i, accs[w]);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  Accum out = accs[0];
  for (unsigned w = 1; w < workers; ++w) out.merge(accs[w]);
  return out;
}

}  // namespace hyperwalk
