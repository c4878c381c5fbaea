#include "noisewarp/core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "noisewarp/philox.hpp"

namespace noisewarp {

Shape::Shape(std::initializer_list<std::int64_t> extents)
    : Shape(std::span<const std::int64_t>(extents.begin(), extents.size())) {}

Shape::Shape(std::span<const std::int64_t> extents) {
  if (extents.size() < 2 || extents.size() > 3) {
    throw std::invalid_argument("shape must have 2 or 3 spatial extents");
  }
  for (const auto e : extents) {
    if (e <= 0) throw std::invalid_argument("shape extents must be positive");
    extents_.push_back(static_cast<std::size_t>(e));
  }
}

std::size_t Shape::pixel_count() const {
  if (extents_.empty()) return 0;
  std::size_t n = 1;
  for (const auto e : extents_) n *= e;
  return n;
}

void Shape::unravel(std::size_t pixel, std::span<std::size_t> coords) const {
  for (std::size_t a = rank(); a-- > 0;) {
    coords[a] = pixel % extents_[a];
    pixel /= extents_[a];
  }
}

std::string Shape::to_string() const {
  std::string s;
  for (std::size_t a = 0; a < extents_.size(); ++a) {
    if (a) s += 'x';
    s += std::to_string(extents_[a]);
  }
  return s;
}

namespace {

bool finite_span(std::span<const double> values) {
  return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
}

}  // namespace

NoiseTensor::NoiseTensor(Shape shape, std::size_t channels)
    : shape_(std::move(shape)), channels_(channels), pixel_count_(shape_.pixel_count()) {
  if (channels_ == 0) throw std::invalid_argument("tensor needs at least one channel");
  if (pixel_count_ == 0) throw std::invalid_argument("tensor shape is empty");
  data_.assign(pixel_count_ * channels_, 0.0);
}

NoiseTensor::NoiseTensor(Shape shape, std::size_t channels, std::vector<double> data)
    : NoiseTensor(std::move(shape), channels) {
  if (data.size() != data_.size()) {
    throw std::invalid_argument("tensor data length does not match shape x channels");
  }
  if (!finite_span(data)) throw std::invalid_argument("tensor data contains non-finite values");
  data_ = std::move(data);
}

bool NoiseTensor::all_finite() const { return finite_span(data_); }

FlowField::FlowField(Shape shape) : shape_(std::move(shape)) {
  if (shape_.pixel_count() == 0) throw std::invalid_argument("flow shape is empty");
  vectors_.assign(shape_.pixel_count() * shape_.rank(), 0.0);
}

FlowField::FlowField(Shape shape, std::vector<double> vectors) : FlowField(std::move(shape)) {
  if (vectors.size() != vectors_.size()) {
    throw std::invalid_argument("flow vector count does not match shape");
  }
  if (!finite_span(vectors)) throw std::invalid_argument("flow contains non-finite values");
  vectors_ = std::move(vectors);
}

FlowField FlowField::negated() const {
  FlowField out = *this;
  for (auto& v : out.vectors_) v = -v;
  return out;
}

bool FlowField::all_finite() const { return finite_span(vectors_); }

PartitionRecord::PartitionRecord(Shape shape, std::vector<std::size_t> offsets,
                                 std::vector<PartitionEntry> entries)
    : shape_(std::move(shape)), offsets_(std::move(offsets)), entries_(std::move(entries)) {
  const std::size_t n = shape_.pixel_count();
  if (offsets_.size() != n + 1 || offsets_.front() != 0 || offsets_.back() != entries_.size()) {
    throw std::invalid_argument("partition offsets do not match shape/entries");
  }
  for (std::size_t s = 0; s < n; ++s) {
    if (offsets_[s] > offsets_[s + 1]) {
      throw std::invalid_argument("partition offsets are not monotone");
    }
  }
  for (const auto& e : entries_) {
    if (!(e.area > 0.0) || !std::isfinite(e.area)) {
      throw std::invalid_argument("partition entry area must be positive and finite");
    }
    if (e.dest >= n) throw std::invalid_argument("partition entry destination out of bounds");
  }
}

PartitionRecord PartitionRecord::identity(const Shape& shape) {
  const std::size_t n = shape.pixel_count();
  std::vector<std::size_t> offsets(n + 1);
  std::vector<PartitionEntry> entries(n);
  for (std::size_t p = 0; p < n; ++p) {
    offsets[p + 1] = p + 1;
    entries[p] = {1.0, static_cast<std::uint32_t>(p)};
  }
  return PartitionRecord(shape, std::move(offsets), std::move(entries));
}

double PartitionRecord::source_total(std::size_t source) const {
  double total = 0.0;
  for (const auto& e : entries(source)) total += e.area;
  return total;
}

bool PartitionRecord::operator==(const PartitionRecord& other) const {
  if (!(shape_ == other.shape_) || offsets_ != other.offsets_ ||
      entries_.size() != other.entries_.size()) {
    return false;
  }
  for (std::size_t k = 0; k < entries_.size(); ++k) {
    if (entries_[k].area != other.entries_[k].area || entries_[k].dest != other.entries_[k].dest) {
      return false;
    }
  }
  return true;
}

namespace {

PhiloxKey philox_key(std::uint64_t seed, Stream stream) {
  const std::uint64_t k =
      splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(stream) + 0x5851F42D4C957F2Dull));
  return {static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32)};
}

// Draws come in pairs: draws 2m and 2m+1 share one Philox block.
PhiloxCounter philox_block(const RngKey& key, PhiloxKey pk) {
  return philox4x32_10({static_cast<std::uint32_t>(key.pixel),
                        static_cast<std::uint32_t>(key.pixel >> 32), key.channel, key.draw >> 1},
                       pk);
}

// 53-bit uniform strictly inside (0, 1).
double to_unit(std::uint32_t hi, std::uint32_t lo) {
  const std::uint64_t bits = ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

// Box-Muller on one block: returns both independent normals. Kept out of
// line: when inlined with one output dead, GCC calls cos instead of sincos
// and the result can differ by an ulp between call sites.
[[gnu::noinline]] std::pair<double, double> normal_pair(const PhiloxCounter& block) {
  const double u1 = to_unit(block[0], block[1]);
  const double u2 = to_unit(block[2], block[3]);
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  return {r * std::cos(theta), r * std::sin(theta)};
}

}  // namespace

double standard_normal(const RngKey& key) {
  const auto [z0, z1] = normal_pair(philox_block(key, philox_key(key.seed, key.stream)));
  return (key.draw & 1u) ? z1 : z0;
}

double uniform01(const RngKey& key) {
  const auto block = philox_block(key, philox_key(key.seed, key.stream));
  return (key.draw & 1u) ? to_unit(block[2], block[3]) : to_unit(block[0], block[1]);
}

void fill_standard_normal(RngKey first, std::span<double> out) {
  const PhiloxKey pk = philox_key(first.seed, first.stream);
  std::size_t k = 0;
  RngKey key = first;
  if ((key.draw & 1u) && k < out.size()) {
    out[k++] = normal_pair(philox_block(key, pk)).second;
    ++key.draw;
  }
  while (k + 1 < out.size()) {
    const auto [z0, z1] = normal_pair(philox_block(key, pk));
    out[k++] = z0;
    out[k++] = z1;
    key.draw += 2;
  }
  if (k < out.size()) out[k] = normal_pair(philox_block(key, pk)).first;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(splitmix64(seed) ^ (index * 0xD1B54A32D192ED03ull + 0x2545F4914F6CDD1Dull));
}

NoiseTensor make_prior_noise(const Shape& shape, std::size_t channels, std::uint64_t seed) {
  NoiseTensor out(shape, channels);
  const auto n = static_cast<std::int64_t>(out.pixel_count());
  for (std::size_t c = 0; c < channels; ++c) {
    auto plane = out.channel(c);
#pragma omp parallel for schedule(static)
    for (std::int64_t p = 0; p < n; ++p) {
      plane[p] = standard_normal({seed, static_cast<std::uint64_t>(p),
                                  static_cast<std::uint32_t>(c), 0, Stream::prior});
    }
  }
  return out;
}

}  // namespace noisewarp
