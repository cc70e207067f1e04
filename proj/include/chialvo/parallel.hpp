#pragma once

#include <cstddef>
#include <functional>

namespace chialvo {

// default worker count: CHIALVO_WORKERS if set, else hardware concurrency
int default_workers();

// Runs fn(i) for i in [0, n). Tasks must write only to their own slot so the
// result is independent of scheduling.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn);

}  // namespace chialvo
