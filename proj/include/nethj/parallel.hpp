#pragma once

#include <functional>

namespace nethj {

// Process-wide worker cap for parallel loops (default 1). Results never
// depend on the thread count: work is partitioned by index and writes are
// disjoint.
void set_thread_count(int threads);
int thread_count();

void parallel_for(int begin, int end, const std::function<void(int)>& body);

}  // namespace nethj
