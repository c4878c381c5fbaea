#pragma once

// Heap accounting through replaced global operator new/delete. Linking
// memtrack.cpp into a binary activates it for the whole process.

#include <cstddef>

namespace noisewarp::memtrack {

// Live bytes allocated through operator new.
std::size_t current_bytes();
// Peak live bytes since the last reset_peak().
std::size_t peak_bytes();
// Restarts peak tracking from the current live byte count.
void reset_peak();
// Process maximum resident set size so far, in bytes.
std::size_t max_rss_bytes();

}  // namespace noisewarp::memtrack
