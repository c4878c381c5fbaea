#include "noisewarp/io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <vector>

namespace noisewarp {

namespace {

static_assert(std::endian::native == std::endian::little, "io assumes a little-endian host");

constexpr char kTensorMagic[4] = {'N', 'W', 'T', '1'};
constexpr float kFloMagic = 202021.25f;
// Largest accepted element count; guards against absurd headers.
constexpr std::uint64_t kMaxElements = std::uint64_t{1} << 32;

std::vector<char> slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string(), 0);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Sequential reader that reports the offset of the first bad byte.
class Cursor {
 public:
  explicit Cursor(const std::vector<char>& bytes) : bytes_(bytes) {}

  template <typename T>
  T take(const char* what) {
    if (bytes_.size() - pos_ < sizeof(T)) throw FormatError(std::string("truncated ") + what, pos_);
    T value;
    std::memcpy(&value, bytes_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return value;
  }
  std::size_t pos() const { return pos_; }
  std::size_t remaining() const { return bytes_.size() - pos_; }
  const char* here() const { return bytes_.data() + pos_; }
  void skip(std::size_t n) { pos_ += n; }

 private:
  const std::vector<char>& bytes_;
  std::size_t pos_ = 0;
};

std::vector<double> read_floats(Cursor& cur, std::uint64_t count, const char* what) {
  if (cur.remaining() < count * sizeof(float)) throw FormatError(std::string("truncated ") + what, cur.pos());
  std::vector<double> values(count);
  for (std::uint64_t k = 0; k < count; ++k) {
    float f;
    std::memcpy(&f, cur.here(), sizeof f);
    if (!std::isfinite(f)) throw FormatError(std::string("non-finite value in ") + what, cur.pos());
    values[k] = f;
    cur.skip(sizeof f);
  }
  if (cur.remaining() != 0) throw FormatError("trailing bytes after payload", cur.pos());
  return values;
}

template <typename T>
void put(std::vector<char>& out, T value) {
  const auto* p = reinterpret_cast<const char*>(&value);
  out.insert(out.end(), p, p + sizeof(T));
}

// Writes to a sibling temporary and renames, so readers never see a partial file.
void commit(const std::vector<char>& bytes, const std::filesystem::path& path) {
  std::filesystem::path tmp = path;
  tmp += ".part";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("write failed for " + path.string());
  }
  std::filesystem::rename(tmp, path);
}

float to_float(double v) {
  const auto f = static_cast<float>(v);
  if (!std::isfinite(f)) throw std::invalid_argument("value does not fit in 32-bit float");
  return f;
}

}  // namespace

NoiseTensor read_tensor(const std::filesystem::path& path) {
  const auto bytes = slurp(path);
  Cursor cur(bytes);
  const std::size_t magic_at = cur.pos();
  char magic[4];
  for (char& c : magic) c = cur.take<char>("magic");
  if (std::memcmp(magic, kTensorMagic, 4) != 0) throw FormatError("bad tensor magic", magic_at);

  const std::size_t rank_at = cur.pos();
  const auto rank = cur.take<std::uint8_t>("rank");
  if (rank < 2 || rank > 3) throw FormatError("tensor rank must be 2 or 3", rank_at);
  std::vector<std::int64_t> extents;
  std::uint64_t elements = 1;
  for (int a = 0; a < rank; ++a) {
    const std::size_t at = cur.pos();
    const auto e = cur.take<std::uint32_t>("extent");
    if (e == 0) throw FormatError("zero extent", at);
    elements *= e;
    if (elements > kMaxElements) throw FormatError("tensor dimensions overflow", at);
    extents.push_back(e);
  }
  const std::size_t ch_at = cur.pos();
  const auto channels = cur.take<std::uint32_t>("channel count");
  if (channels == 0) throw FormatError("zero channel count", ch_at);
  elements *= channels;
  if (elements > kMaxElements) throw FormatError("tensor dimensions overflow", ch_at);

  auto data = read_floats(cur, elements, "tensor payload");
  return NoiseTensor(Shape(extents), channels, std::move(data));
}

void write_tensor(const NoiseTensor& tensor, const std::filesystem::path& path) {
  std::vector<char> bytes(kTensorMagic, kTensorMagic + 4);
  put(bytes, static_cast<std::uint8_t>(tensor.shape().rank()));
  for (const auto e : tensor.shape().extents()) put(bytes, static_cast<std::uint32_t>(e));
  put(bytes, static_cast<std::uint32_t>(tensor.channels()));
  bytes.reserve(bytes.size() + tensor.data().size() * sizeof(float));
  for (const double v : tensor.data()) put(bytes, to_float(v));
  commit(bytes, path);
}

FlowField read_flo(const std::filesystem::path& path) {
  const auto bytes = slurp(path);
  Cursor cur(bytes);
  const auto magic = cur.take<float>("magic");
  if (magic != kFloMagic) throw FormatError("bad .flo magic", 0);
  const std::size_t w_at = cur.pos();
  const auto width = cur.take<std::int32_t>("width");
  const std::size_t h_at = cur.pos();
  const auto height = cur.take<std::int32_t>("height");
  if (width <= 0) throw FormatError(".flo width must be positive", w_at);
  if (height <= 0) throw FormatError(".flo height must be positive", h_at);
  const std::uint64_t pixels = static_cast<std::uint64_t>(width) * static_cast<std::uint64_t>(height);
  if (pixels * 2 > kMaxElements) throw FormatError(".flo dimensions overflow", w_at);

  const auto uv = read_floats(cur, pixels * 2, ".flo payload");
  std::vector<double> vectors(pixels * 2);
  for (std::uint64_t p = 0; p < pixels; ++p) {
    vectors[2 * p + 0] = uv[2 * p + 1];  // v: along axis 0 (rows)
    vectors[2 * p + 1] = uv[2 * p + 0];  // u: along axis 1 (columns)
  }
  return FlowField(Shape{height, width}, std::move(vectors));
}

void write_flo(const FlowField& flow, const std::filesystem::path& path) {
  if (flow.rank() != 2) throw std::invalid_argument(".flo holds 2D flow only");
  std::vector<char> bytes;
  put(bytes, kFloMagic);
  put(bytes, static_cast<std::int32_t>(flow.shape()[1]));
  put(bytes, static_cast<std::int32_t>(flow.shape()[0]));
  for (std::size_t p = 0; p < flow.pixel_count(); ++p) {
    put(bytes, to_float(flow.component(p, 1)));
    put(bytes, to_float(flow.component(p, 0)));
  }
  commit(bytes, path);
}

FlowField flow_from_tensor(const NoiseTensor& tensor) {
  const std::size_t rank = tensor.shape().rank();
  if (tensor.channels() != rank) {
    throw std::invalid_argument("flow tensor needs one channel per spatial axis");
  }
  std::vector<double> vectors(tensor.pixel_count() * rank);
  for (std::size_t p = 0; p < tensor.pixel_count(); ++p) {
    for (std::size_t a = 0; a < rank; ++a) vectors[p * rank + a] = tensor.at(a, p);
  }
  return FlowField(tensor.shape(), std::move(vectors));
}

NoiseTensor flow_to_tensor(const FlowField& flow) {
  NoiseTensor tensor(flow.shape(), flow.rank());
  for (std::size_t p = 0; p < flow.pixel_count(); ++p) {
    for (std::size_t a = 0; a < flow.rank(); ++a) tensor.at(a, p) = flow.component(p, a);
  }
  return tensor;
}

FlowField read_flow(const std::filesystem::path& path) {
  if (path.extension() == ".flo") return read_flo(path);
  return flow_from_tensor(read_tensor(path));
}

void write_flow(const FlowField& flow, const std::filesystem::path& path) {
  if (path.extension() == ".flo") {
    write_flo(flow, path);
  } else {
    write_tensor(flow_to_tensor(flow), path);
  }
}

unsigned char pgm_level(double value, double clip_sigma) {
  const double scaled = (value + clip_sigma) / (2.0 * clip_sigma) * 255.0;
  return static_cast<unsigned char>(std::clamp(std::round(scaled), 0.0, 255.0));
}

void export_pgm(const NoiseTensor& tensor, const std::filesystem::path& path, double clip_sigma) {
  if (tensor.shape().rank() != 2 || tensor.channels() != 1) {
    throw std::invalid_argument("PGM export needs a single-channel 2D tensor");
  }
  if (!(clip_sigma > 0.0)) throw std::invalid_argument("clip_sigma must be positive");
  const std::string header = "P5\n" + std::to_string(tensor.shape()[1]) + " " +
                             std::to_string(tensor.shape()[0]) + "\n255\n";
  std::vector<char> bytes(header.begin(), header.end());
  for (const double v : tensor.data()) bytes.push_back(static_cast<char>(pgm_level(v, clip_sigma)));
  commit(bytes, path);
}

}  // namespace noisewarp
