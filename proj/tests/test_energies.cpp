#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "fraccap/energies.hpp"
#include "test_helpers.hpp"

using namespace fraccap;

namespace {

QuadratureConfig identity_cfg() {
  QuadratureConfig cfg;
  cfg.max_subdivision_depth = 4;
  // Identities are exact regroupings of one truncated universe, so a slim
  // truncation margin keeps them fast without weakening the test.
  cfg.tail_radius = 0.5;
  return cfg;
}

double breakdown_scale(const EnergyBreakdown& b) {
  double s = 1.0;
  for (const auto& t : b.terms) s += std::abs(t.coefficient * t.result.value);
  return s;
}

}  // namespace

TEST_CASE("capillarity of the empty droplet is zero") {
  Box w = Box::cube(2, 1.0);
  GridSet omega = GridSet::rasterize(Region::ball(0.9), w, 32);
  GridSet empty(w, 32);
  KernelParams p{2, 0.5, 0.3};
  EnergyBreakdown b = capillarity_energy(empty, omega, p, identity_cfg());
  CHECK(b.total == 0.0);
  CHECK(b.terms.size() == 2);
}

TEST_CASE("droplet filling the container with sigma zero costs nothing") {
  Box w = Box::cube(2, 1.0);
  GridSet omega = GridSet::rasterize(Region::ball(0.9), w, 32);
  KernelParams p{2, 0.5, 0.0};
  EnergyBreakdown b = capillarity_energy(omega, omega, p, identity_cfg());
  CHECK(b.terms[0].result.value == 0.0);
  CHECK(b.terms[1].coefficient == 0.0);
  CHECK(b.total == 0.0);
}

TEST_CASE("containment is enforced") {
  Box w = Box::cube(2, 1.0);
  GridSet omega = GridSet::rasterize(Region::ball(0.5), w, 32);
  GridSet big = GridSet::rasterize(Region::ball(0.8), w, 32);
  KernelParams p{2, 0.5, 0.3};
  CHECK_THROWS_AS(capillarity_energy(big, omega, p, identity_cfg()), std::invalid_argument);
  CHECK_THROWS_AS(capillarity_energy(big, Region::ball(0.5), p, identity_cfg()),
                  std::invalid_argument);
}

TEST_CASE("capillarity terms agree with independent estimates") {
  // Half-disk droplet in a disk container at s = 0.5, sigma = 0.3.
  Box w = Box::cube(2, 1.0);
  int res = 64;
  KernelParams p{2, 0.5, 0.3};
  QuadratureConfig cfg;
  cfg.max_subdivision_depth = 5;
  cfg.tail_radius = 8.0;
  Region droplet_region = Region::intersect(Region::ball(0.6), Region::halfspace());
  GridSet E = GridSet::rasterize(droplet_region, w, res);
  GridSet omega = GridSet::rasterize(Region::ball(0.9), w, res);
  EnergyBreakdown b = capillarity_energy(E, omega, p, cfg);

  // First term against the grid Monte-Carlo oracle.
  GridSet EcOm = boolean_op(omega, E, BoolOp::Difference);
  InteractionResult mc1 = interaction_mc(E, EcOm, p, 1'500'000, 11);
  CHECK(std::abs(b.terms[0].result.value - mc1.value) <=
        b.terms[0].result.error_estimate + mc1.error_estimate);

  // Second term: compare against a bounded analytic collar computed by both
  // the deterministic engine and the region Monte-Carlo oracle.
  Region collar = Region::intersect(Region::complement(Region::ball(0.9)), Region::ball(8.0));
  InteractionResult det_collar = interaction(E, collar, p, cfg);
  InteractionResult mc2 = interaction_mc(droplet_region, collar, p, 1'500'000, 12);
  CHECK(std::abs(det_collar.value - mc2.value) <=
        det_collar.error_estimate + mc2.error_estimate + 0.02 * mc2.value);
  // The full omega^c term dominates the collar and stays within its tail.
  CHECK(b.terms[1].result.value >= det_collar.value - b.terms[1].result.error_estimate);
  CHECK(b.terms[1].result.value <=
        det_collar.value + b.terms[1].result.tail_bound + b.terms[1].result.error_estimate +
            det_collar.error_estimate);
}

TEST_CASE("fractional perimeter basics") {
  Box w = Box::cube(2, 1.0);
  KernelParams p{2, 0.5, 0.0};
  QuadratureConfig cfg = identity_cfg();

  GridSet empty(w, 32);
  EnergyBreakdown zero = fractional_perimeter(empty, Region::ball(0.8), p, cfg);
  CHECK(zero.total == 0.0);

  GridSet half = GridSet::rasterize(Region::halfspace(), w, 64);
  EnergyBreakdown per = fractional_perimeter(half, Region::ball(0.8), p, cfg);
  CHECK(per.total > 0.0);
  CHECK(std::isfinite(per.total));
  CHECK(per.terms.size() == 3);
  for (const auto& t : per.terms) CHECK(t.result.value > 0.0);
}

TEST_CASE("perimeter is symmetric under complementing the set") {
  Box w = Box::cube(2, 1.0);
  KernelParams p{2, 0.5, 0.0};
  QuadratureConfig cfg = identity_cfg();
  GridSet F = testing::random_droplet(w, 48, 31);
  Region omega = Region::ball(0.85);

  EnergyBreakdown direct = fractional_perimeter(F, omega, p, cfg);
  EnergyBreakdown flipped = fractional_perimeter_complement(F, omega, p, cfg);
  // Term map under F <-> F^c: t1 <-> t1, t2 <-> t3.
  CHECK(direct.terms[0].result.value == flipped.terms[0].result.value);
  CHECK(direct.terms[1].result.value == flipped.terms[2].result.value);
  CHECK(direct.terms[2].result.value == flipped.terms[1].result.value);
  CHECK(std::abs(direct.total - flipped.total) <= 1e-12 * breakdown_scale(direct));
}

TEST_CASE("half ball perimeter recomposes from raw workspace sums") {
  Box w = Box::cube(2, 1.0);
  KernelParams p{2, 0.5, 0.0};
  QuadratureConfig cfg = identity_cfg();
  GridSet F = GridSet::rasterize(
      Region::intersect(Region::sector(0.0, std::numbers::pi / 2.0), Region::ball(2.0)), w, 64);
  HalfspaceEnergySystem sys(F, p, cfg, 1.0);
  EnergyBreakdown direct = sys.per_s_sigma(1.0);

  const LatticeWorkspace& ws = sys.workspace();
  const GridSet& Fe = sys.embedded_set();
  GridSet H = ws.raster(Region::halfspace());
  GridSet Ball = ws.raster(Region::ball(1.0));
  GridSet BH = boolean_op(Ball, H, BoolOp::Intersect);
  GridSet FB = boolean_op(Fe, Ball, BoolOp::Intersect);
  GridSet FBc = boolean_op(Fe, Ball, BoolOp::Difference);
  GridSet FcBH = boolean_op(BH, Fe, BoolOp::Difference);
  GridSet BHc = boolean_op(Ball, H, BoolOp::Difference);
  GridSet FcBcH = boolean_op(boolean_op(H, Ball, BoolOp::Difference), Fe, BoolOp::Difference);
  GridSet BcHc = boolean_op(boolean_op(ws.full(), H, BoolOp::Difference), Ball, BoolOp::Difference);

  double e = 0.0;
  double a = ws.pair_sum(FB, FcBH, e);
  double a2 = ws.pair_sum(FB, BHc, e);
  double bb = ws.pair_sum(FB, FcBcH, e);
  double b2 = ws.pair_sum(FB, BcHc, e);
  double d = ws.pair_sum(FBc, FcBH, e);
  double recomposed = (a + bb + a2 + b2 + d) + (p.sigma - 1.0) * (a2 + b2);
  CHECK(direct.total == recomposed);
}

TEST_CASE("sigma one drops the wetting group") {
  Box w = Box::cube(2, 1.0);
  KernelParams p{2, 0.5, 1.0 - 1e-12};
  QuadratureConfig cfg = identity_cfg();
  GridSet F = testing::random_droplet(w, 48, 77);
  HalfspaceEnergySystem sys(F, p, cfg, 0.8);
  EnergyBreakdown b = sys.per_s_sigma(0.6);
  CHECK(std::abs(b.terms[1].coefficient) <= 1e-12);
  CHECK(b.total == doctest::Approx(sys.perimeter_half_ball(0.6).total).epsilon(1e-10));
}

TEST_CASE("local minimality energy equals the localized perimeter form") {
  Box w = Box::cube(2, 1.0);
  KernelParams p{2, 0.5, 0.3};
  QuadratureConfig cfg = identity_cfg();
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    GridSet F = testing::random_droplet(w, 64, 100 + seed);
    if (F.occupied_count() == 0) continue;
    HalfspaceEnergySystem sys(F, p, cfg, 0.8);
    for (double R : {0.45, 0.75}) {
      EnergyBreakdown lhs = sys.minimizer_comparison(R);
      EnergyBreakdown rhs = sys.per_s_sigma(R);
      CHECK(std::abs(lhs.total - rhs.total) <= 1e-10 * breakdown_scale(lhs));
    }
  }
}

TEST_CASE("ball and half ball perimeters differ by the wall interaction") {
  Box w = Box::cube(2, 1.0);
  KernelParams p{2, 0.5, 0.0};
  QuadratureConfig cfg = identity_cfg();
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    GridSet F = testing::random_droplet(w, 64, 300 + seed);
    if (F.occupied_count() == 0) continue;
    HalfspaceEnergySystem sys(F, p, cfg, 0.8);
    double R = 0.55;
    double lhs = sys.perimeter_ball(R).total - sys.perimeter_half_ball(R).total;
    double rhs = sys.wall_term(R).value;
    CHECK(std::abs(lhs - rhs) <= 1e-10 * breakdown_scale(sys.perimeter_ball(R)));
  }
}

TEST_CASE("perimeter differences telescope for sets agreeing outside the ball") {
  Box w = Box::cube(2, 1.0);
  KernelParams p{2, 0.5, 0.2};
  QuadratureConfig cfg = identity_cfg();
  double R = 0.4, R2 = 0.7;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    GridSet E = testing::random_droplet(w, 64, 500 + seed);
    GridSet F = E;
    std::mt19937_64 rng(900 + seed);
    // Toggle cells strictly inside B_R while staying inside the half-space.
    for (std::int64_t flat = 0; flat < F.cell_count(); ++flat) {
      auto c = F.cell_center(flat);
      if (c[1] <= 0.0) continue;
      if (c[0] * c[0] + c[1] * c[1] >= 0.9 * 0.9 * R * R) continue;
      if (rng() % 3 == 0) F.set(flat, !F.occupied(flat));
    }
    if (E.occupied_count() == 0 || F.occupied_count() == 0) continue;
    GridSet diff = boolean_op(E, F, BoolOp::SymmetricDifference);
    if (diff.occupied_count() == 0) continue;

    HalfspaceEnergySystem se(E, p, cfg, R2 + 0.05);
    HalfspaceEnergySystem sf(F, p, cfg, R2 + 0.05);
    double at_r2 = se.perimeter_ball(R2).total - sf.perimeter_ball(R2).total;
    double at_r = se.perimeter_ball(R).total - sf.perimeter_ball(R).total;
    double scale = breakdown_scale(se.perimeter_ball(R2)) + breakdown_scale(sf.perimeter_ball(R2));
    CHECK(std::abs(at_r2 - at_r) <= 1e-10 * scale);
  }
}

TEST_CASE("wetting term responds to the tail radius only through its bound") {
  // Values computed in two truncated universes agree after accounting for
  // the truncation envelopes, and the energy difference of two sets agreeing
  // outside B_R is insensitive to the truncation choice.
  Box w = Box::cube(2, 1.0);
  KernelParams p{2, 0.5, 0.3};
  GridSet E = testing::random_droplet(w, 64, 43);
  GridSet F = E;
  std::mt19937_64 rng(44);
  for (std::int64_t flat = 0; flat < F.cell_count(); ++flat) {
    auto c = F.cell_center(flat);
    if (c[1] <= 0.0) continue;
    if (c[0] * c[0] + c[1] * c[1] >= 0.3 * 0.3) continue;
    if (rng() % 3 == 0) F.set(flat, !F.occupied(flat));
  }
  REQUIRE(E.occupied_count() > 0);
  REQUIRE(F.occupied_count() > 0);

  QuadratureConfig near_cfg = identity_cfg();
  near_cfg.tail_radius = 1.0;
  QuadratureConfig far_cfg = identity_cfg();
  far_cfg.tail_radius = 3.0;

  double R = 0.45;
  HalfspaceEnergySystem se_near(E, p, near_cfg, 0.6), sf_near(F, p, near_cfg, 0.6);
  HalfspaceEnergySystem se_far(E, p, far_cfg, 0.6), sf_far(F, p, far_cfg, 0.6);
  double diff_near = se_near.minimizer_comparison(R).total - sf_near.minimizer_comparison(R).total;
  double diff_far = se_far.minimizer_comparison(R).total - sf_far.minimizer_comparison(R).total;
  double tails = se_near.minimizer_comparison(R).tail_bound +
                 sf_near.minimizer_comparison(R).tail_bound;
  CHECK(std::abs(diff_near - diff_far) <= tails + 1e-6);
}
