#pragma once

#include <cstddef>
#include <functional>

namespace inspectra {

/// Worker count used by parallel_for; 0 selects hardware concurrency.
void set_thread_count(unsigned n);
unsigned thread_count();

/// Runs body(begin, end) over disjoint chunks of [0, n). Callers must write
/// results into per-index slots and reduce them afterwards in index order, so
/// results never depend on scheduling.
void parallel_for(std::size_t n,
                  const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace inspectra
