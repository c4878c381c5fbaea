#include "noisewarp/bridge.hpp"

#include <cmath>
#include <stdexcept>

namespace noisewarp {

BridgeState bridge_step(const BridgeState& state, double dt, const RngKey& key) {
  if (!(dt >= 0.0)) throw std::invalid_argument("bridge step needs dt >= 0");
  const double t_next = state.t + dt;
  if (t_next > 1.0 + kBridgeTimeSlack) {
    throw std::invalid_argument("bridge step would pass t = 1");
  }
  if (dt == 0.0) return state;

  const double remaining = 1.0 - state.t;
  if (remaining < kBridgeTerminalFloor || 1.0 - t_next < kBridgeTerminalFloor) {
    return {state.c, 1.0, state.c};
  }

  const double mean = ((1.0 - t_next) * state.q + dt * state.c) / remaining;
  const double variance = dt * (1.0 - t_next) / remaining;
  return {state.c, t_next, mean + std::sqrt(variance) * standard_normal(key)};
}

std::vector<double> bridge_prefix_path(double c, std::span<const double> times, RngKey key) {
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (!(times[k] >= 0.0 && times[k] <= 1.0)) {
      throw std::invalid_argument("bridge times must lie in [0,1]");
    }
    if (k > 0 && times[k] < times[k - 1]) {
      throw std::invalid_argument("bridge times must be sorted");
    }
  }
  std::vector<double> values;
  values.reserve(times.size());
  BridgeState state{c, 0.0, 0.0};
  for (const double t : times) {
    state = bridge_step(state, t - state.t, key);
    ++key.draw;
    values.push_back(state.q);
  }
  return values;
}

void sample_upsampled_subimage(double c, std::size_t n, RngKey key, std::span<double> out) {
  if (n == 0) throw std::invalid_argument("upsampling level must be >= 1");
  const std::size_t count = n * n;
  if (out.size() != count) throw std::invalid_argument("subimage buffer has wrong size");
  fill_standard_normal(key, out);
  double sum = 0.0;
  for (const double z : out) sum += z;
  const double inv_n = 1.0 / static_cast<double>(n);
  const double inv_count = 1.0 / static_cast<double>(count);
  const double mean_z = sum * inv_count;
  const double base = c * inv_count;
  for (double& x : out) x = base + (x - mean_z) * inv_n;
}

std::vector<double> sample_upsampled_subimage(double c, std::size_t n, RngKey key) {
  if (n == 0) throw std::invalid_argument("upsampling level must be >= 1");
  std::vector<double> out(n * n);
  sample_upsampled_subimage(c, n, key, out);
  return out;
}

}  // namespace noisewarp
