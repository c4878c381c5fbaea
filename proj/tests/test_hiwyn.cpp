#include <doctest.h>
#include <omp.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "noisewarp/bridge.hpp"
#include "noisewarp/flows.hpp"
#include "noisewarp/geometry.hpp"
#include "noisewarp/hiwyn.hpp"
#include "stats_util.hpp"

using namespace noisewarp;

TEST_CASE("identity flow returns the prior exactly for every N") {
  const Shape s{7, 5};
  const auto prior = make_prior_noise(s, 2, 13);
  const FlowField zero(s);
  for (const std::size_t n : {1u, 2u, 3u, 8u}) {
    CHECK(hiwyn_warp(prior, zero, n, 4).warped == prior);
    CHECK(hiwyn_warp_eulerian(prior, zero, n, 4).warped == prior);
  }
}

TEST_CASE("single pixel with full coverage returns the prior value") {
  const Shape s{1, 1};
  const NoiseTensor prior(s, 1, {1.2345});
  for (const std::size_t n : {1u, 5u, 16u}) {
    CHECK(hiwyn_warp(prior, FlowField(s), n, 0).warped.at(0, 0) == 1.2345);
    CHECK(hiwyn_warp_eulerian(prior, FlowField(s), n, 0).warped.at(0, 0) == 1.2345);
  }
}

TEST_CASE("half-pixel shift at N=2 gathers two subpixels from each of two sources") {
  const Shape s{4, 3};
  const std::vector<double> d{0.5, 0.0};
  const auto flow = uniform_flow(s, d);
  const HiwynPlan plan(flow, 2);
  const auto prior = make_prior_noise(s, 1, 6);
  const std::uint64_t seed = 31;
  const auto out = hiwyn_warp(prior, plan, seed);

  std::vector<std::vector<double>> sub(s.pixel_count());
  for (std::size_t p = 0; p < s.pixel_count(); ++p) {
    sub[p] = sample_upsampled_subimage(prior.at(0, p), 2, {seed, p, 0, 0, Stream::upsample});
  }
  for (std::size_t i = 0; i + 1 < 4; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      const std::size_t dest = s.index(i, j);
      const std::size_t next = s.index(i + 1, j);
      CHECK(plan.dest_count(dest) == 4);
      CHECK(out.area[dest] == 1.0);
      const auto shares = plan.sources_of(dest);
      REQUIRE(shares.size() == 2);
      CHECK(shares[0].pixel == dest);
      CHECK(shares[0].count == 2);
      CHECK(shares[1].pixel == next);
      CHECK(shares[1].count == 2);
      // Subpixel k = a*2 + b: the lower row of `dest`, the upper row of `next`.
      const double expected = sub[dest][2] + sub[dest][3] + sub[next][0] + sub[next][1];
      CHECK(out.warped.at(0, dest) == doctest::Approx(expected).epsilon(1e-14));
    }
  }
  // The last row keeps two of its own subpixels: area 1/2.
  CHECK(out.area[s.index(3, 1)] == 0.5);
}

TEST_CASE("each subpixel goes to the lowest-index covering octagon") {
  const Shape s{6, 6};
  const std::vector<double> point{3.0, 3.0};
  // Heavy overlap: everything collapses towards one point.
  FlowField flow = collapse_flow(s, point);
  for (std::size_t p = 0; p < s.pixel_count(); ++p) {
    flow.set(p, 0, 0.6 * flow.component(p, 0));
    flow.set(p, 1, 0.6 * flow.component(p, 1));
  }
  const std::size_t n = 4;
  const HiwynPlan plan(flow, n);
  std::vector<Polygon> octagons;
  for (std::size_t d = 0; d < s.pixel_count(); ++d) {
    octagons.push_back(warp_square_to_octagon(flow, d / 6, d % 6));
  }
  std::size_t owned = 0;
  for (std::size_t p = 0; p < s.pixel_count(); ++p) {
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        const Point2 c{(static_cast<double>(p / 6 * n + a) + 0.5) / n,
                       (static_cast<double>(p % 6 * n + b) + 0.5) / n};
        std::uint32_t expected = kUnowned;
        for (std::size_t d = 0; d < octagons.size() && expected == kUnowned; ++d) {
          if (point_in_polygon(octagons[d].vertices, c)) expected = static_cast<std::uint32_t>(d);
        }
        CHECK(plan.owner(p, a * n + b) == expected);
        owned += expected != kUnowned;
      }
    }
  }
  std::size_t counted = 0;
  for (std::size_t d = 0; d < s.pixel_count(); ++d) counted += plan.dest_count(d);
  CHECK(counted == owned);
}

TEST_CASE("output has unit variance under a smooth flow") {
  const Shape s{8, 8};
  const HiwynPlan plan(vortex_flow(s, 1.0, 2.5), 4);
  const std::size_t runs = 20000;
  std::vector<std::vector<double>> v(3, std::vector<double>(runs));
  const std::vector<std::size_t> pixels{s.index(4, 4), s.index(2, 5), s.index(7, 0)};
  for (std::size_t r = 0; r < runs; ++r) {
    const auto prior = make_prior_noise(s, 1, derive_seed(8, r));
    const auto out = hiwyn_warp(prior, plan, r);
    for (std::size_t k = 0; k < 3; ++k) v[k][r] = out.warped.at(0, pixels[k]);
  }
  for (const auto& x : v) {
    const auto m = testutil::moments(x);
    CHECK(std::abs(m.mean) < 3.0 * std::sqrt(1.0 / runs));
    CHECK(std::abs(m.var - 1.0) < 3.0 * testutil::var_se(1.0, runs));
  }
}

TEST_CASE("plan and warp are thread-count independent") {
  const Shape s{40, 36};
  const auto flow = random_smooth_flow(s, 2.5, 6);
  const auto prior = make_prior_noise(s, 2, 2);
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  const auto a = hiwyn_warp(prior, flow, 5, 7);
  const auto ae = hiwyn_warp_eulerian(prior, flow, 5, 7);
  omp_set_num_threads(4);
  const auto b = hiwyn_warp(prior, flow, 5, 7);
  const auto be = hiwyn_warp_eulerian(prior, flow, 5, 7);
  omp_set_num_threads(saved);
  CHECK(a.warped == b.warped);
  CHECK(a.vacated == b.vacated);
  CHECK(ae.warped == be.warped);
}

TEST_CASE("invalid arguments") {
  const Shape s{4, 4};
  const auto prior = make_prior_noise(s, 1, 0);
  CHECK_THROWS_AS(hiwyn_warp(prior, FlowField(s), 0, 0), std::invalid_argument);
  CHECK_THROWS_AS(hiwyn_warp_eulerian(prior, FlowField(s), 0, 0), std::invalid_argument);
  CHECK_THROWS_AS(hiwyn_warp(prior, FlowField(Shape{4, 5}), 2, 0), std::invalid_argument);
  CHECK_THROWS_AS(HiwynPlan(FlowField(Shape{2, 2, 2}), 2), std::invalid_argument);
  const HiwynPlan plan(FlowField(Shape{5, 5}), 2);
  CHECK_THROWS_AS(hiwyn_warp(prior, plan, 0), std::invalid_argument);
}
