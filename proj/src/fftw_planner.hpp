#pragma once

#include <mutex>

namespace regfrac::detail {

// FFTW's planner is not reentrant; every plan creation/destruction in the
// library goes through this lock.
inline std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

}  // namespace regfrac::detail
