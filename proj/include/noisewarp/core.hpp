#pragma once

// Shared domain types for noise warping.
//
// Coordinates: a grid with extents (D0, D1[, D2]) covers [0,D0]x[0,D1][x[0,D2]]
// in pixel units. Pixel (i,j) is the unit cell [i,i+1]x[j,j+1] with centre
// (i+0.5, j+0.5). Pixels are addressed by their row-major linear index
// (last axis fastest). Areas are fractions of one pixel, so a fully
// distributed source pixel consumes bridge time exactly 1.

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace noisewarp {

// Raised when a computed result breaks one of the library's own guarantees.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class Shape {
 public:
  Shape() = default;
  // Throws std::invalid_argument unless there are 2 or 3 positive extents.
  Shape(std::initializer_list<std::int64_t> extents);
  explicit Shape(std::span<const std::int64_t> extents);

  std::size_t rank() const { return extents_.size(); }
  std::size_t operator[](std::size_t axis) const { return extents_[axis]; }
  std::span<const std::size_t> extents() const { return extents_; }
  std::size_t pixel_count() const;

  std::size_t index(std::size_t i, std::size_t j) const { return i * extents_[1] + j; }
  std::size_t index(std::size_t i, std::size_t j, std::size_t k) const {
    return (i * extents_[1] + j) * extents_[2] + k;
  }
  // Inverse of index(); writes rank() coordinates.
  void unravel(std::size_t pixel, std::span<std::size_t> coords) const;

  // "128x128", "16x16x16".
  std::string to_string() const;

  bool operator==(const Shape&) const = default;

 private:
  std::vector<std::size_t> extents_;
};

// Channel-planar dense tensor: element (channel c, pixel p) lives at
// data[c * pixel_count + p].
class NoiseTensor {
 public:
  NoiseTensor() = default;
  NoiseTensor(Shape shape, std::size_t channels);  // zero-filled
  // Validates length and finiteness.
  NoiseTensor(Shape shape, std::size_t channels, std::vector<double> data);

  const Shape& shape() const { return shape_; }
  std::size_t channels() const { return channels_; }
  std::size_t pixel_count() const { return pixel_count_; }

  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }
  std::span<const double> channel(std::size_t c) const {
    return std::span<const double>(data_).subspan(c * pixel_count_, pixel_count_);
  }
  std::span<double> channel(std::size_t c) {
    return std::span<double>(data_).subspan(c * pixel_count_, pixel_count_);
  }
  double at(std::size_t c, std::size_t pixel) const { return data_[c * pixel_count_ + pixel]; }
  double& at(std::size_t c, std::size_t pixel) { return data_[c * pixel_count_ + pixel]; }

  bool all_finite() const;
  bool operator==(const NoiseTensor&) const = default;

 private:
  Shape shape_;
  std::size_t channels_ = 0;
  std::size_t pixel_count_ = 0;
  std::vector<double> data_;
};

// Per-pixel displacement in pixel units. Component a of pixel p moves along
// spatial axis a; the deformation is psi(x) = x + flow(x).
class FlowField {
 public:
  FlowField() = default;
  explicit FlowField(Shape shape);  // zero flow
  // vectors[p * rank + a]; validates length and finiteness.
  FlowField(Shape shape, std::vector<double> vectors);

  const Shape& shape() const { return shape_; }
  std::size_t rank() const { return shape_.rank(); }
  std::size_t pixel_count() const { return shape_.pixel_count(); }

  double component(std::size_t pixel, std::size_t axis) const {
    return vectors_[pixel * rank() + axis];
  }
  void set(std::size_t pixel, std::size_t axis, double value) {
    vectors_[pixel * rank() + axis] = value;
  }
  std::span<const double> vectors() const { return vectors_; }

  FlowField negated() const;
  bool all_finite() const;
  bool operator==(const FlowField&) const = default;

 private:
  Shape shape_;
  std::vector<double> vectors_;
};

struct PartitionEntry {
  double area;         // fraction of one source pixel, > 0
  std::uint32_t dest;  // linear index of the receiving pixel
};

// For every source pixel, the destinations that take part of its area, in
// the order the bridge walk visits them. Stored as CSR.
class PartitionRecord {
 public:
  PartitionRecord() = default;
  // Validates offsets, positive finite areas and in-bounds destinations.
  PartitionRecord(Shape shape, std::vector<std::size_t> offsets,
                  std::vector<PartitionEntry> entries);

  static PartitionRecord identity(const Shape& shape);

  const Shape& shape() const { return shape_; }
  std::size_t source_count() const { return offsets_.size() - 1; }
  std::size_t entry_count() const { return entries_.size(); }
  std::span<const PartitionEntry> entries(std::size_t source) const {
    return std::span<const PartitionEntry>(entries_).subspan(
        offsets_[source], offsets_[source + 1] - offsets_[source]);
  }
  std::span<const std::size_t> offsets() const { return offsets_; }
  std::span<const PartitionEntry> all_entries() const { return entries_; }
  double source_total(std::size_t source) const;

  bool operator==(const PartitionRecord& other) const;

 private:
  Shape shape_;
  std::vector<std::size_t> offsets_{0};
  std::vector<PartitionEntry> entries_;
};

// Independent random streams. Keys that differ only in stream are independent.
enum class Stream : std::uint32_t {
  prior = 1,
  bridge = 2,
  refill = 3,
  upsample = 4,
  frame = 5,
  experiment = 6,
};

// Address of one random draw. A key is used either for a normal or for a
// uniform draw, never both.
struct RngKey {
  std::uint64_t seed = 0;
  std::uint64_t pixel = 0;
  std::uint32_t channel = 0;
  std::uint32_t draw = 0;
  Stream stream = Stream::prior;
};

double standard_normal(const RngKey& key);
double uniform01(const RngKey& key);  // in (0, 1)
// out[k] = standard_normal(first with draw = first.draw + k).
void fill_standard_normal(RngKey first, std::span<double> out);

// Seed for an independent sub-experiment (a frame, a run, ...).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

NoiseTensor make_prior_noise(const Shape& shape, std::size_t channels, std::uint64_t seed);

}  // namespace noisewarp
