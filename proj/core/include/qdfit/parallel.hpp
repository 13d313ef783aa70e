#pragma once

#include <functional>

namespace qdfit {

/// Runs fn(i) for i in [0, n) over at most `threads` workers with a static
/// partition. Each index must write only its own output slot; results are
/// then independent of the thread count.
void parallel_for(int n, int threads, const std::function<void(int)>& fn);

}  // namespace qdfit
