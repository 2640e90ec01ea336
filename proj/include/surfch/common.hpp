#pragma once

#include <Eigen/Dense>

#include <functional>
#include <stdexcept>

namespace surfch {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Worker threads used by element loops (default 1). Results do not depend
/// on this setting; single-threaded runs are bitwise reproducible.
void set_threads(int count);
int thread_count();

/// Splits [0, count) into contiguous chunks and runs body(begin, end) on the
/// configured number of threads. Callers write to disjoint, preallocated
/// slots and merge in index order afterwards, so the outcome is identical
/// for any thread count.
void parallel_for_chunks(std::size_t count,
                         const std::function<void(std::size_t, std::size_t)>& body);

} // namespace surfch
