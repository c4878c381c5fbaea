#pragma once

// File formats.
//
// Tensor file (.nwt), little-endian:
//   "NWT1" | u8 rank | u32 extent x rank | u32 channels | f32 payload
// The payload is channel-major, then row-major over the spatial axes, i.e.
// the in-memory NoiseTensor layout.
//
// Middlebury .flo: f32 magic 202021.25 | i32 width | i32 height |
// interleaved (u, v) f32 per pixel, rows top to bottom. Width runs along
// axis 1 and height along axis 0, so u is the axis-1 component and v the
// axis-0 component.

#include <cstddef>
#include <filesystem>
#include <stdexcept>
#include <string>

#include "noisewarp/core.hpp"

namespace noisewarp {

class FormatError : public std::runtime_error {
 public:
  FormatError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

NoiseTensor read_tensor(const std::filesystem::path& path);
void write_tensor(const NoiseTensor& tensor, const std::filesystem::path& path);

FlowField read_flo(const std::filesystem::path& path);
void write_flo(const FlowField& flow, const std::filesystem::path& path);

// A flow stored as a tensor with one channel per spatial axis. Used for 3D.
FlowField flow_from_tensor(const NoiseTensor& tensor);
NoiseTensor flow_to_tensor(const FlowField& flow);
// Dispatches on extension: ".flo" or tensor file.
FlowField read_flow(const std::filesystem::path& path);
void write_flow(const FlowField& flow, const std::filesystem::path& path);

// Binary PGM (P5): [-clip_sigma, clip_sigma] maps linearly to [0, 255],
// rounded half away from zero and saturated. Needs a single-channel 2D tensor.
void export_pgm(const NoiseTensor& tensor, const std::filesystem::path& path,
                double clip_sigma = 3.0);
unsigned char pgm_level(double value, double clip_sigma);

}  // namespace noisewarp
