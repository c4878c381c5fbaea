// Acceptance suite: one PASS/FAIL line per criterion. Pass criterion numbers
// as arguments to run a subset, e.g. `acceptance 3 5`.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "bench.hpp"
#include "cli.hpp"
#include "noisewarp/bridge.hpp"
#include "noisewarp/evaluation.hpp"
#include "noisewarp/flows.hpp"
#include "noisewarp/hiwyn.hpp"
#include "noisewarp/partition.hpp"
#include "noisewarp/warp.hpp"
#include "stats_util.hpp"

using namespace noisewarp;

namespace {

struct Verdict {
  bool pass;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

// Expected shifted-identity output of an integer shift; vacated pixels are
// the destinations no source lands on.
bool check_integer_shift(const NoiseTensor& prior, const WarpOutput& out,
                         const std::vector<std::int64_t>& shift, std::uint64_t seed) {
  const Shape& s = prior.shape();
  std::vector<std::size_t> c(s.rank());
  std::vector<std::uint32_t> vacated;
  for (std::size_t p = 0; p < s.pixel_count(); ++p) {
    s.unravel(p, c);
    bool inside = true;
    std::size_t src = 0;
    for (std::size_t a = 0; a < s.rank(); ++a) {
      const auto q = static_cast<std::int64_t>(c[a]) + shift[a];
      inside = inside && q >= 0 && q < static_cast<std::int64_t>(s[a]);
      src = src * s[a] + static_cast<std::size_t>(std::clamp<std::int64_t>(q, 0, static_cast<std::int64_t>(s[a]) - 1));
    }
    if (!inside) vacated.push_back(static_cast<std::uint32_t>(p));
    for (std::uint32_t ch = 0; ch < prior.channels(); ++ch) {
      const double expected =
          inside ? prior.at(ch, src) : standard_normal({seed, p, ch, 0, Stream::refill});
      if (out.warped.at(ch, p) != expected) return false;
    }
  }
  return out.vacated == vacated;
}

// ---------------------------------------------------------------------------

Verdict criterion_1() {
  const auto t0 = Clock::now();
  const Shape s{128, 128};
  const auto flow = vortex_flow(s, 0.25, 32.0);
  const std::vector<FlowField> flows(50, flow);
  const std::size_t seeds = 20;
  bool pass = true;
  std::ostringstream detail;

  for (const auto method : {PartitionMethod::grid, PartitionMethod::particle}) {
    std::vector<double> ks, moran;
    std::size_t both_tiny = 0;
    for (std::size_t k = 0; k < seeds; ++k) {
      const auto prior = make_prior_noise(s, 1, derive_seed(100, k));
      const auto last = warp_sequence(prior, flows, method, derive_seed(200, k)).back();
      ks.push_back(ks_test_standard_normal(last.data()).p_value);
      moran.push_back(morans_i(last).p_value);
      both_tiny += ks.back() < 1e-3 && moran.back() < 1e-3;
    }
    const bool ok = median(ks) >= 0.05 && median(moran) >= 0.05 && both_tiny == 0;
    pass = pass && ok;
    detail << (method == PartitionMethod::grid ? "grid" : "particle") << " median p ks "
           << fmt(median(ks)) << " moran " << fmt(median(moran)) << "; ";
  }

  for (const auto mode : {InterpMode::bilinear, InterpMode::bicubic}) {
    double worst_ks = 0.0, worst_moran = 0.0;
    for (std::size_t k = 0; k < seeds; ++k) {
      auto noise = make_prior_noise(s, 1, derive_seed(100, k));
      for (std::size_t step = 0; step < 50; ++step) noise = warp_interpolated(noise, flow, mode);
      worst_ks = std::max(worst_ks, ks_test_standard_normal(noise.data()).p_value);
      worst_moran = std::max(worst_moran, morans_i(noise).p_value);
    }
    pass = pass && worst_ks < 1e-6 && worst_moran < 1e-6;
    detail << (mode == InterpMode::bilinear ? "bilinear" : "bicubic") << " max p ks " << fmt(worst_ks)
           << " moran " << fmt(worst_moran) << "; ";
  }
  const double secs = seconds_since(t0);
  pass = pass && secs < 120.0;
  detail << fmt(secs) << " s";
  return {pass, detail.str()};
}

Verdict criterion_2() {
  const auto t0 = Clock::now();
  const Shape s{8, 8};
  const auto prior = make_prior_noise(s, 1, derive_seed(0, 0));
  const std::vector<std::size_t> levels{2, 4, 8, 16, 64};
  const auto r = convergence_experiment(prior, cli::default_convergence_flow(s), levels, 20000,
                                        derive_seed(0, 1));
  const double w2 = r.rows[0].mean_w;
  const double w64 = r.rows[4].mean_w;
  bool decreasing = true;
  for (std::size_t k = 1; k < 4; ++k) decreasing = decreasing && r.rows[k].mean_w < r.rows[k - 1].mean_w;
  const double self = r.self_mean_w;
  const double secs = seconds_since(t0);
  const bool pass = w2 >= 0.14 && w2 <= 0.28 && decreasing && w64 < 0.1 * w2 &&
                    w64 >= self / 3.0 && w64 <= 3.0 * self && secs < 1800.0;
  std::ostringstream d;
  d << "mean W:";
  for (const auto& row : r.rows) d << " N=" << row.level << " " << fmt(row.mean_w);
  d << "; self " << fmt(self) << "; " << fmt(secs) << " s";
  return {pass, d.str()};
}

Verdict criterion_3() {
  const Shape s{24, 20};
  const auto prior = make_prior_noise(s, 3, 7);
  const std::uint64_t seed = 5;
  bool pass = true;
  std::ostringstream d;

  const FlowField zero(s);
  for (const auto method : {PartitionMethod::grid, PartitionMethod::particle}) {
    const auto out = warp_noise(prior, build_partition(zero, method), seed);
    pass = pass && out.warped == prior && out.vacated.empty();
  }
  for (const std::size_t n : {1u, 2u, 8u}) pass = pass && hiwyn_warp(prior, zero, n, seed).warped == prior;
  d << "identity " << (pass ? "exact" : "mismatch");

  bool shifts = true;
  for (const auto& shift : std::vector<std::vector<std::int64_t>>{{1, 0}, {0, -3}, {2, 5}}) {
    const std::vector<double> disp{static_cast<double>(shift[0]), static_cast<double>(shift[1])};
    const auto flow = uniform_flow(s, disp);
    for (const auto method : {PartitionMethod::grid, PartitionMethod::particle}) {
      shifts = shifts && check_integer_shift(prior, warp_noise(prior, build_partition(flow, method), seed),
                                             shift, seed);
    }
  }
  d << "; integer shifts " << (shifts ? "exact" : "mismatch");
  return {pass && shifts, d.str()};
}

Verdict criterion_4() {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<std::size_t> pick_n(1, 64);
  std::normal_distribution<double> pick_c(0.0, 10.0);
  double worst = 0.0;
  std::vector<double> sub;
  for (std::uint64_t k = 0; k < 10000; ++k) {
    const double c = pick_c(rng);
    const std::size_t n = pick_n(rng);
    sub.resize(n * n);
    sample_upsampled_subimage(c, n, {k, 0, 0, 0, Stream::upsample}, sub);
    double sum = 0.0;
    for (const double x : sub) sum += x;
    worst = std::max(worst, std::abs(sum - c));
  }
  return {worst <= 1e-9, "max |sum - c| " + fmt(worst)};
}

Verdict criterion_5() {
  const Shape s{4, 4};
  const std::vector<double> d{0.0, 0.5};  // half a pixel along x (columns)
  const auto record = build_grid_partition(uniform_flow(s, d));
  const std::size_t runs = 100000;
  std::vector<std::vector<double>> prior_v(16, std::vector<double>(runs)), out_v = prior_v;
  for (std::size_t r = 0; r < runs; ++r) {
    const auto prior = make_prior_noise(s, 1, derive_seed(501, r));
    const auto out = warp_noise(prior, record, derive_seed(502, r));
    for (std::size_t p = 0; p < 16; ++p) {
      prior_v[p][r] = prior.at(0, p);
      out_v[p][r] = out.warped.at(0, p);
    }
  }
  bool pass = true;
  double worst_var = 0.0, worst_cov = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      const std::size_t p = s.index(i, j);
      const double var = testutil::moments(out_v[p]).var;
      const double zv = std::abs(var - 1.0) / testutil::var_se(1.0, runs);
      worst_var = std::max(worst_var, zv);
      pass = pass && zv <= 3.0;
      // Last column: only its own half survives, rescaled by 1/sqrt(0.5).
      const bool edge = j == 3;
      const double expected = edge ? 0.5 / std::sqrt(0.5) : 0.5;
      std::vector<std::size_t> sources{p};
      if (!edge) sources.push_back(s.index(i, j + 1));
      for (const std::size_t src : sources) {
        const double cov = testutil::covariance(out_v[p], prior_v[src]);
        const double z = std::abs(cov - expected) / testutil::cov_se(1.0, 1.0, expected, runs);
        worst_cov = std::max(worst_cov, z);
        pass = pass && z <= 3.0;
      }
    }
  }
  return {pass, "max |z| variance " + fmt(worst_var) + ", covariance " + fmt(worst_cov)};
}

Verdict criterion_6() {
  const Shape s{4, 4};
  const HiwynPlan plan(vortex_flow(s, 1.0, 1.5), 4);
  const std::size_t runs = 100000;
  std::vector<std::vector<double>> lag(16, std::vector<double>(runs)), eul = lag;
  for (std::size_t r = 0; r < runs; ++r) {
    const auto a = hiwyn_warp(make_prior_noise(s, 1, derive_seed(61, r)), plan, derive_seed(62, r));
    const auto b = hiwyn_warp_eulerian(make_prior_noise(s, 1, derive_seed(63, r)), plan, derive_seed(64, r));
    for (std::size_t p = 0; p < 16; ++p) {
      lag[p][r] = a.warped.at(0, p);
      eul[p][r] = b.warped.at(0, p);
    }
  }
  bool pass = true;
  double worst_mean = 0.0, worst_cov = 0.0;
  std::vector<testutil::Moments> ml, me;
  for (std::size_t p = 0; p < 16; ++p) {
    ml.push_back(testutil::moments(lag[p]));
    me.push_back(testutil::moments(eul[p]));
    const double se = std::sqrt((ml[p].var + me[p].var) / static_cast<double>(runs));
    const double z = std::abs(ml[p].mean - me[p].mean) / se;
    worst_mean = std::max(worst_mean, z);
    pass = pass && z <= 3.0;
  }
  for (std::size_t a = 0; a < 16; ++a) {
    for (std::size_t b = a; b < 16; ++b) {
      const double cl = testutil::covariance(lag[a], lag[b]);
      const double ce = testutil::covariance(eul[a], eul[b]);
      const double se = std::hypot(testutil::cov_se(ml[a].var, ml[b].var, cl, runs),
                                   testutil::cov_se(me[a].var, me[b].var, ce, runs));
      const double z = std::abs(cl - ce) / se;
      worst_cov = std::max(worst_cov, z);
      pass = pass && z <= 3.0;
    }
  }
  return {pass, "max |z| mean " + fmt(worst_mean) + ", covariance " + fmt(worst_cov)};
}

Verdict criterion_7() {
  cli::BenchConfig cfg;
  cfg.size = 1024;
  cfg.reps = 5;
  cfg.method = "grid";
  const auto grid = cli::run_bench(cfg);
  cfg.method = "particle";
  const auto particle = cli::run_bench(cfg);
  cfg.method = "hiwyn";
  cfg.reps = 3;
  const auto hiwyn = cli::run_bench(cfg);
  const double speed_grid = hiwyn.median_ms / grid.median_ms;
  const double speed_particle = grid.median_ms / particle.median_ms;
  const double memory = static_cast<double>(hiwyn.kernel_peak_bytes) /
                        static_cast<double>(grid.kernel_peak_bytes);
  const bool pass = speed_grid >= 5.0 && speed_particle >= 1.5 && memory >= 4.0;
  std::ostringstream d;
  d << "median ms grid " << fmt(grid.median_ms) << ", particle " << fmt(particle.median_ms)
    << ", hiwyn(8) " << fmt(hiwyn.median_ms) << "; hiwyn/grid " << fmt(speed_grid)
    << "x, grid/particle " << fmt(speed_particle) << "x, peak heap hiwyn/grid " << fmt(memory) << "x";
  return {pass, d.str()};
}

Verdict criterion_8() {
  const Shape s{64, 64};
  const std::vector<double> point{20.3, 41.7};
  const auto flow = collapse_flow(s, point);
  const auto particle = build_particle_partition(flow);
  const auto grid = build_grid_partition(flow);
  double grid_load = 0.0;
  for (std::size_t p = 0; p < s.pixel_count(); ++p) grid_load = std::max(grid_load, grid.source_total(p));
  std::vector<double> p_particle, p_grid;
  std::size_t particle_clamps = 0, grid_clamps = 0;
  bool finite = true;
  for (std::size_t k = 0; k < 20; ++k) {
    const auto prior = make_prior_noise(s, 1, derive_seed(80, k));
    const auto a = warp_noise(prior, particle, derive_seed(81, k));
    const auto b = warp_noise(prior, grid, derive_seed(82, k));
    particle_clamps += a.clamp_events;
    grid_clamps += b.clamp_events;
    finite = finite && a.warped.all_finite() && b.warped.all_finite();
    p_particle.push_back(ks_test_standard_normal(a.warped.data()).p_value);
    p_grid.push_back(ks_test_standard_normal(b.warped.data()).p_value);
  }
  const bool pass = particle_clamps == 0 && grid_clamps > 0 && finite &&
                    median(p_particle) >= 0.01 && median(p_grid) >= 0.01;
  std::ostringstream d;
  d << "particle clamps " << particle_clamps << ", median K-S p " << fmt(median(p_particle))
    << "; grid clamps " << grid_clamps << " (max source load " << fmt(grid_load)
    << "), median K-S p " << fmt(median(p_grid))
    << (finite ? ", finite" : ", NON-FINITE");
  return {pass, d.str()};
}

Verdict criterion_9() {
  const Shape cube{16, 16, 16};
  const auto prior = make_prior_noise(cube, 2, 9);
  bool exact = warp_noise(prior, build_particle_partition_3d(FlowField(cube)), 3).warped == prior;
  for (const auto& shift : std::vector<std::vector<std::int64_t>>{{1, 0, 0}, {0, -2, 3}}) {
    const std::vector<double> disp(shift.begin(), shift.end());
    const auto out = warp_noise(prior, build_particle_partition_3d(uniform_flow(cube, disp)), 3);
    exact = exact && check_integer_shift(prior, out, shift, 3);
  }

  const Shape small{4, 4, 4};
  const auto record = build_particle_partition_3d(random_smooth_flow(small, 1.5, 9));
  const std::size_t runs = 10000;
  std::vector<std::vector<double>> v(64, std::vector<double>(runs));
  for (std::size_t r = 0; r < runs; ++r) {
    const auto out = warp_noise(make_prior_noise(small, 1, derive_seed(91, r)), record, derive_seed(92, r));
    for (std::size_t p = 0; p < 64; ++p) v[p][r] = out.warped.at(0, p);
  }
  double worst = 0.0;
  for (const auto& x : v) {
    worst = std::max(worst, std::abs(testutil::moments(x).var - 1.0) / testutil::var_se(1.0, runs));
  }
  return {exact && worst <= 3.0,
          std::string("16^3 identity/shift ") + (exact ? "exact" : "mismatch") +
              "; 4^3 max |z| variance " + fmt(worst)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<Verdict()>> criteria{criterion_1, criterion_2, criterion_3,
                                                       criterion_4, criterion_5, criterion_6,
                                                       criterion_7, criterion_8, criterion_9};
  std::set<int> wanted;
  for (int k = 1; k < argc; ++k) wanted.insert(std::atoi(argv[k]));
  try {
    cli::apply_thread_env();
  } catch (const std::exception& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return 1;
  }

  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const int id = static_cast<int>(k) + 1;
    if (!wanted.empty() && !wanted.count(id)) continue;
    Verdict v;
    try {
      v = criteria[k]();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failures += !v.pass;
    std::printf("criterion %d: %s  %s\n", id, v.pass ? "PASS" : "FAIL", v.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
