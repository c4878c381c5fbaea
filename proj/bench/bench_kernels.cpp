// Serial reference kernels against the OpenMP kernels. Thread count follows
// OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include "noisewarp/flows.hpp"
#include "noisewarp/hiwyn.hpp"
#include "noisewarp/partition.hpp"
#include "noisewarp/reference.hpp"
#include "noisewarp/warp.hpp"

namespace nw = noisewarp;

namespace {

nw::Shape square(const benchmark::State& state) {
  const auto n = static_cast<std::int64_t>(state.range(0));
  return nw::Shape{n, n};
}

nw::FlowField flow_for(const nw::Shape& s) {
  return nw::vortex_flow(s, 1.0, static_cast<double>(s[0]) / 4.0);
}

void set_pixels(benchmark::State& state, const nw::Shape& s) {
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(s.pixel_count()));
}

void BM_Prior(benchmark::State& state) {
  const auto s = square(state);
  for (auto _ : state) benchmark::DoNotOptimize(nw::make_prior_noise(s, 1, 1));
  set_pixels(state, s);
}

void BM_PriorReference(benchmark::State& state) {
  const auto s = square(state);
  for (auto _ : state) benchmark::DoNotOptimize(nw::reference::make_prior_noise(s, 1, 1));
  set_pixels(state, s);
}

void BM_GridPartition(benchmark::State& state) {
  const auto s = square(state);
  const auto flow = flow_for(s);
  for (auto _ : state) benchmark::DoNotOptimize(nw::build_grid_partition(flow));
  set_pixels(state, s);
}

void BM_GridPartitionReference(benchmark::State& state) {
  const auto s = square(state);
  const auto flow = flow_for(s);
  for (auto _ : state) benchmark::DoNotOptimize(nw::reference::build_grid_partition(flow));
  set_pixels(state, s);
}

void BM_ParticlePartition(benchmark::State& state) {
  const auto s = square(state);
  const auto flow = flow_for(s);
  for (auto _ : state) benchmark::DoNotOptimize(nw::build_particle_partition(flow));
  set_pixels(state, s);
}

void BM_ParticlePartitionReference(benchmark::State& state) {
  const auto s = square(state);
  const auto flow = flow_for(s);
  for (auto _ : state) benchmark::DoNotOptimize(nw::reference::build_particle_partition(flow));
  set_pixels(state, s);
}

void BM_Warp(benchmark::State& state) {
  const auto s = square(state);
  const auto prior = nw::make_prior_noise(s, 1, 1);
  const auto record = nw::build_grid_partition(flow_for(s));
  for (auto _ : state) benchmark::DoNotOptimize(nw::warp_noise(prior, record, 2));
  set_pixels(state, s);
}

void BM_WarpReference(benchmark::State& state) {
  const auto s = square(state);
  const auto prior = nw::make_prior_noise(s, 1, 1);
  const auto record = nw::build_grid_partition(flow_for(s));
  for (auto _ : state) benchmark::DoNotOptimize(nw::reference::warp_noise(prior, record, 2));
  set_pixels(state, s);
}

void BM_Hiwyn(benchmark::State& state) {
  const auto s = square(state);
  const auto prior = nw::make_prior_noise(s, 1, 1);
  const auto flow = flow_for(s);
  for (auto _ : state) benchmark::DoNotOptimize(nw::hiwyn_warp(prior, flow, 8, 2));
  set_pixels(state, s);
}

void BM_HiwynReference(benchmark::State& state) {
  const auto s = square(state);
  const auto prior = nw::make_prior_noise(s, 1, 1);
  const auto flow = flow_for(s);
  for (auto _ : state) benchmark::DoNotOptimize(nw::reference::hiwyn_warp(prior, flow, 8, 2));
  set_pixels(state, s);
}

}  // namespace

BENCHMARK(BM_Prior)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PriorReference)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GridPartition)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GridPartitionReference)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ParticlePartition)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ParticlePartitionReference)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Warp)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_WarpReference)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Hiwyn)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_HiwynReference)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
