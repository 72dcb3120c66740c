#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "fraccap/parallel.hpp"
#include "fraccap/quadrature.hpp"

using namespace fraccap;

TEST_CASE("adaptive simpson on smooth integrands") {
  auto r = adaptive_simpson([](double x) { return std::sin(x); }, 0.0, std::numbers::pi, 1e-10);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-9));

  auto p = adaptive_simpson([](double x) { return x * x * x; }, -1.0, 2.0, 1e-12);
  CHECK(p.value == doctest::Approx(15.0 / 4.0).epsilon(1e-10));
}

TEST_CASE("adaptive simpson handles integrable endpoint blowup") {
  // f(x) = x^{-1/2} on (eps, 1]: steep but resolvable.
  auto r = adaptive_simpson([](double x) { return 1.0 / std::sqrt(x); }, 1e-8, 1.0, 1e-8);
  CHECK(r.value == doctest::Approx(2.0 - 2e-4).epsilon(1e-6));
  CHECK(r.error <= 1e-6);
}

TEST_CASE("degenerate interval integrates to zero") {
  auto r = adaptive_simpson([](double) { return 7.0; }, 1.5, 1.5, 1e-10);
  CHECK(r.value == 0.0);
  CHECK(r.converged);
}

TEST_CASE("depth exhaustion is reported") {
  auto r = adaptive_simpson([](double x) { return 1.0 / std::sqrt(std::abs(x - 0.3)); },
                            0.0, 1.0, 1e-14, 8);
  CHECK(!r.converged);
  CHECK(r.error > 0.0);
}

TEST_CASE("chunked parallel for covers every index once") {
  std::vector<int> hits(1000, 0);
  int n_chunks = 64;
  parallel_for_chunks(n_chunks, [&](int chunk) {
    auto range = chunk_range(1000, n_chunks, chunk);
    for (std::int64_t i = range.begin; i < range.end; ++i) hits[static_cast<std::size_t>(i)]++;
  });
  for (int h : hits) CHECK(h == 1);
}

TEST_CASE("chunk ranges partition and are near equal") {
  std::int64_t total = 0;
  for (int c = 0; c < 7; ++c) {
    auto r = chunk_range(100, 7, c);
    total += r.end - r.begin;
    CHECK(r.end - r.begin >= 14);
    CHECK(r.end - r.begin <= 15);
  }
  CHECK(total == 100);
}
