#pragma once

// Deterministic assembly of a source-major partition record from requests
// produced in destination row-major order, possibly split across threads.

#include <cstdint>
#include <deque>
#include <span>
#include <vector>

#include <omp.h>

#include "noisewarp/core.hpp"

namespace noisewarp::detail {

struct Request {
  std::uint32_t source;
  std::uint32_t dest;
  double weight;
};

// Chunked storage: growth never copies or over-allocates by a factor of two.
using RequestBlock = std::deque<Request>;

struct SourceMajor {
  std::vector<std::size_t> offsets;
  std::vector<PartitionEntry> entries;
};

// Runs `emit(dest, out)` for every destination, with destinations split into
// contiguous blocks, one per thread. Block b's requests precede block b+1's,
// so the concatenation is in destination order for any thread count.
template <typename Emit>
std::vector<RequestBlock> collect_requests(std::size_t dest_count, Emit&& emit) {
  std::vector<RequestBlock> blocks;
#pragma omp parallel
  {
#pragma omp single
    blocks.resize(static_cast<std::size_t>(omp_get_num_threads()));
    const auto t = static_cast<std::size_t>(omp_get_thread_num());
    const std::size_t nblocks = blocks.size();
    const std::size_t begin = dest_count * t / nblocks;
    const std::size_t end = dest_count * (t + 1) / nblocks;
    auto& out = blocks[t];
    for (std::size_t d = begin; d < end; ++d) emit(d, out);
  }
  return blocks;
}

// Stable counting sort by source; within a source, entries keep request order.
inline SourceMajor group_by_source(std::size_t source_count,
                                   const std::vector<RequestBlock>& blocks) {
  SourceMajor out;
  out.offsets.assign(source_count + 1, 0);
  for (const auto& block : blocks) {
    for (const auto& r : block) ++out.offsets[r.source + 1];
  }
  for (std::size_t s = 0; s < source_count; ++s) out.offsets[s + 1] += out.offsets[s];
  out.entries.resize(out.offsets.back());
  std::vector<std::size_t> cursor(out.offsets.begin(), out.offsets.end() - 1);
  for (const auto& block : blocks) {
    for (const auto& r : block) out.entries[cursor[r.source]++] = {r.weight, r.dest};
  }
  return out;
}

}  // namespace noisewarp::detail
