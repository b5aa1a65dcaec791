#pragma once

#include <cstddef>
#include <functional>

namespace wavelab {

/// Calls body(begin, end) over contiguous chunks of [0, count), on up to
/// `threads` workers. Chunks never overlap, so bodies that write disjoint
/// outputs give results independent of scheduling.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace wavelab
