#include <doctest.h>
#include <omp.h>

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "noisewarp/core.hpp"
#include "noisewarp/evaluation.hpp"
#include "noisewarp/philox.hpp"
#include "stats_util.hpp"

using namespace noisewarp;

TEST_CASE("philox4x32-10 known-answer vectors") {
  // Published Random123 test vectors.
  const auto zero = philox4x32_10({0, 0, 0, 0}, {0, 0});
  CHECK(zero == PhiloxCounter{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
  const auto ones = philox4x32_10({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                                  {0xffffffffu, 0xffffffffu});
  CHECK(ones == PhiloxCounter{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
  const auto pi = philox4x32_10({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                                {0xa4093822u, 0x299f31d0u});
  CHECK(pi == PhiloxCounter{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("shape validation and indexing") {
  CHECK_THROWS_AS(Shape({4}), std::invalid_argument);
  CHECK_THROWS_AS(Shape({2, 2, 2, 2}), std::invalid_argument);
  CHECK_THROWS_AS(Shape({4, 0}), std::invalid_argument);
  CHECK_THROWS_AS(Shape({4, -3}), std::invalid_argument);

  const Shape s{3, 4, 5};
  CHECK(s.pixel_count() == 60);
  CHECK(s.to_string() == "3x4x5");
  std::vector<std::size_t> c(3);
  for (std::size_t p = 0; p < s.pixel_count(); ++p) {
    s.unravel(p, c);
    CHECK(s.index(c[0], c[1], c[2]) == p);
  }
  CHECK(Shape{8, 8}.index(2, 3) == 19);
}

TEST_CASE("tensor and flow validation") {
  const Shape s{2, 2};
  CHECK_THROWS_AS(NoiseTensor(s, 1, std::vector<double>(3)), std::invalid_argument);
  CHECK_THROWS_AS(NoiseTensor(s, 0), std::invalid_argument);
  std::vector<double> bad(4, 0.0);
  bad[2] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(NoiseTensor(s, 1, bad), std::invalid_argument);
  bad[2] = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(FlowField(s, std::vector<double>{0, 0, 0, 0, 0, 0, bad[2], 0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(FlowField(s, std::vector<double>(7)), std::invalid_argument);

  FlowField f(s);
  f.set(1, 0, 2.5);
  CHECK(f.negated().component(1, 0) == -2.5);
  CHECK(f.negated().negated() == f);
}

TEST_CASE("partition record validation") {
  const Shape s{2, 2};
  CHECK_NOTHROW(PartitionRecord(s, {0, 1, 1, 1, 1}, {{1.0, 3}}));
  CHECK_THROWS_AS(PartitionRecord(s, {0, 1, 1, 1, 1}, {{0.0, 3}}), std::invalid_argument);
  CHECK_THROWS_AS(PartitionRecord(s, {0, 1, 1, 1, 1}, {{-0.5, 3}}), std::invalid_argument);
  CHECK_THROWS_AS(PartitionRecord(s, {0, 1, 1, 1, 1}, {{1.0, 4}}), std::invalid_argument);
  CHECK_THROWS_AS(PartitionRecord(s, {0, 1, 1, 1}, {{1.0, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(PartitionRecord(s, {0, 1, 0, 1, 1}, {{1.0, 0}}), std::invalid_argument);

  const auto id = PartitionRecord::identity(s);
  for (std::size_t p = 0; p < 4; ++p) {
    REQUIRE(id.entries(p).size() == 1);
    CHECK(id.entries(p)[0].area == 1.0);
    CHECK(id.entries(p)[0].dest == p);
  }
}

TEST_CASE("prior noise is deterministic and thread-count independent") {
  const auto a = make_prior_noise(Shape{4, 4}, 1, 7);
  const auto b = make_prior_noise(Shape{4, 4}, 1, 7);
  CHECK(a == b);

  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  const auto one = make_prior_noise(Shape{64, 48}, 3, 11);
  omp_set_num_threads(4);
  const auto four = make_prior_noise(Shape{64, 48}, 3, 11);
  omp_set_num_threads(saved);
  CHECK(one == four);
}

TEST_CASE("prior noise moments at 256x256") {
  const auto t = make_prior_noise(Shape{256, 256}, 1, 3);
  const auto m = testutil::moments(t.data());
  CHECK(std::abs(m.mean) < 0.02);
  CHECK(std::abs(m.var - 1.0) < 0.02);
}

TEST_CASE("different seeds give uncorrelated priors (Fisher z over 1000 pairs)") {
  // Under independence atanh(r) ~ N(0, 1/(n-3)) with n = 16.
  double z_sum = 0.0;
  const int pairs = 1000;
  for (int k = 0; k < pairs; ++k) {
    const auto a = make_prior_noise(Shape{4, 4}, 1, 7 + 2 * static_cast<std::uint64_t>(k));
    const auto b = make_prior_noise(Shape{4, 4}, 1, 8 + 2 * static_cast<std::uint64_t>(k));
    z_sum += std::atanh(testutil::correlation(a.data(), b.data()));
  }
  const double z_mean = z_sum / pairs;
  const double se = std::sqrt(1.0 / 13.0 / pairs);
  CHECK(std::abs(z_mean) < 3.0 * se);
}

TEST_CASE("standard_normal: same key, distribution, draw-lag independence") {
  const RngKey key{42, 17, 2, 5, Stream::bridge};
  CHECK(standard_normal(key) == standard_normal(key));

  const std::size_t n = 1000000;
  std::vector<double> x(n);
  for (std::size_t k = 0; k < n; ++k) x[k] = standard_normal({9, k, 0, 0, Stream::prior});
  const auto ks = ks_test_standard_normal(x);
  CHECK(ks.statistic < 1.628 / std::sqrt(static_cast<double>(n)));  // alpha = 0.01

  const std::size_t m = 100000;
  std::vector<double> y(m);
  fill_standard_normal({5, 3, 0, 0, Stream::bridge}, y);
  for (std::size_t k = 0; k < m; ++k) {
    CHECK(y[k] == standard_normal({5, 3, 0, static_cast<std::uint32_t>(k), Stream::bridge}));
  }
  const std::span<const double> ys(y);
  const double r1 = testutil::correlation(ys.first(m - 1), ys.subspan(1));
  CHECK(std::abs(r1) < 3.0 / std::sqrt(static_cast<double>(m)));
}

TEST_CASE("streams and channels are distinct") {
  const double a = standard_normal({1, 0, 0, 0, Stream::prior});
  CHECK(a != standard_normal({1, 0, 0, 0, Stream::bridge}));
  CHECK(a != standard_normal({1, 0, 1, 0, Stream::prior}));
  CHECK(a != standard_normal({2, 0, 0, 0, Stream::prior}));
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
}

TEST_CASE("uniform01 stays inside (0,1) with mean 1/2") {
  double sum = 0.0;
  const int n = 200000;
  for (int k = 0; k < n; ++k) {
    const double u = uniform01({3, static_cast<std::uint64_t>(k), 0, 0, Stream::experiment});
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  // Var(U) = 1/12.
  CHECK(std::abs(sum / n - 0.5) < 3.0 * std::sqrt(1.0 / 12.0 / n));
}
