#pragma once

// Finite-resolution upsampling warp. Every prior pixel is upsampled to N x N
// subpixels that sum to it, each destination octagon collects the subpixels
// whose centres it covers, and the sum is rescaled by sqrt(count / N^2).
//
// A subpixel covered by several octagons goes to the lowest destination
// index, so no subpixel is shared. Two equivalent-in-law forms are provided:
// Lagrangian (gather per destination) and Eulerian (scatter prefix-sum
// segments per source).

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "noisewarp/core.hpp"
#include "noisewarp/warp.hpp"

namespace noisewarp {

inline constexpr std::uint32_t kUnowned = 0xFFFFFFFFu;

// Subpixel ownership for one flow at one upsampling level. Subpixel k = a*N+b
// of pixel p (a along axis 0) is stored at p*N*N + k.
class HiwynPlan {
 public:
  struct Share {
    std::uint32_t pixel;
    std::uint32_t count;
  };
  struct FineBox {
    std::int64_t x0, x1, y0, y1;  // inclusive subpixel ranges; empty when x0 > x1
  };

  HiwynPlan(const FlowField& flow, std::size_t n);

  const Shape& shape() const { return shape_; }
  std::size_t level() const { return n_; }
  std::size_t subpixels_per_pixel() const { return n_ * n_; }

  std::uint32_t owner(std::size_t pixel, std::size_t sub) const {
    return owner_[pixel * n_ * n_ + sub];
  }
  // Sources feeding one destination, in source order.
  std::span<const Share> sources_of(std::size_t dest) const {
    return std::span<const Share>(dest_shares_)
        .subspan(dest_offsets_[dest], dest_offsets_[dest + 1] - dest_offsets_[dest]);
  }
  // Destinations fed by one source, in destination order.
  std::span<const Share> dests_of(std::size_t source) const {
    return std::span<const Share>(source_shares_)
        .subspan(source_offsets_[source], source_offsets_[source + 1] - source_offsets_[source]);
  }
  std::uint32_t dest_count(std::size_t dest) const { return dest_count_[dest]; }
  const FineBox& dest_box(std::size_t dest) const { return dest_boxes_[dest]; }

 private:
  Shape shape_;
  std::size_t n_;
  std::vector<std::uint32_t> owner_;
  std::vector<FineBox> dest_boxes_;
  std::vector<std::size_t> dest_offsets_;
  std::vector<Share> dest_shares_;
  std::vector<std::size_t> source_offsets_;
  std::vector<Share> source_shares_;
  std::vector<std::uint32_t> dest_count_;
};

// Throws std::invalid_argument for N == 0, non-2D or mismatched flow.
WarpOutput hiwyn_warp(const NoiseTensor& prior, const FlowField& flow, std::size_t n,
                      std::uint64_t seed);
WarpOutput hiwyn_warp(const NoiseTensor& prior, const HiwynPlan& plan, std::uint64_t seed);

WarpOutput hiwyn_warp_eulerian(const NoiseTensor& prior, const FlowField& flow, std::size_t n,
                               std::uint64_t seed);
WarpOutput hiwyn_warp_eulerian(const NoiseTensor& prior, const HiwynPlan& plan,
                               std::uint64_t seed);

}  // namespace noisewarp
