#pragma once

#include <cstddef>
#include <functional>

namespace tergm {

/// Worker count used by parallel_for. Defaults to TERGM_THREADS if set,
/// otherwise the hardware concurrency.
std::size_t thread_count();
void set_thread_count(std::size_t threads);

/// Runs body(i) for i in [0, count). Each index must write only to state it
/// owns; the first exception thrown by any body is rethrown after all
/// workers finish.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace tergm
