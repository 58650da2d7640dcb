#pragma once

#include <cstddef>
#include <functional>

namespace khmc {

/// Worker cap: hardware concurrency, clamped by the KINETIC_HMC_THREADS
/// environment variable when set.
std::size_t worker_count();

/// Runs f(0..n-1), possibly across worker_count() threads.  Tasks must not
/// share mutable state except through their own index slots.  The first
/// exception thrown by a task is rethrown after all workers join, so
/// results are index-deterministic regardless of scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& f);

}  // namespace khmc
