#include <cmath>

#include <initializer_list>
#include <stdexcept>

#include <doctest.h>

#include "optstop/rng.hpp"

using namespace optstop;

TEST_SUITE_BEGIN("rng");

TEST_CASE("identical seeds reproduce the stream bit for bit") {
  Rng a(12345), b(12345);
  for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("uniform stays inside the open interval") {
  Rng rng(7);
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform();
    CHECK(u > 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("normal draws have the right first two moments") {
  Rng rng(99);
  const int n = 200000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    sum += z;
    sum2 += z * z;
  }
  const double mean = sum / n;
  const double var = sum2 / n - mean * mean;
  CHECK(std::fabs(mean) < 3.0 / std::sqrt(static_cast<double>(n)));
  CHECK(var == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("exponential draws have the requested rate") {
  Rng rng(3);
  const int n = 200000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += rng.exponential(2.5);
  CHECK(sum / n == doctest::Approx(1.0 / 2.5).epsilon(0.02));
}

TEST_CASE("substreams separate by kind and index") {
  Rng a = substream(42, StreamKind::PathSampler, 0);
  Rng b = substream(42, StreamKind::PathSampler, 1);
  Rng c = substream(42, StreamKind::Sweep, 0);
  Rng a2 = substream(42, StreamKind::PathSampler, 0);
  const std::uint64_t ua = a.next_u64(), ub = b.next_u64(), uc = c.next_u64();
  CHECK(ua != ub);
  CHECK(ua != uc);
  CHECK(ua == a2.next_u64());
}

TEST_SUITE_END();
