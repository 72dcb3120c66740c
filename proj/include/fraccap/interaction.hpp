#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "fraccap/geometry.hpp"
#include "fraccap/kernel.hpp"

namespace fraccap {

struct QuadratureConfig {
  double rel_tol = 1e-3;
  int max_subdivision_depth = 4;
  double farfield_ratio = 4.0;
  // Truncation margin for unbounded second arguments: the working lattice
  // extends at least this far beyond the data before the analytic tail
  // bound takes over.
  double tail_radius = 8.0;
  // Lattice resolution used when both interaction arguments are analytic
  // regions and no grid is supplied by the caller.
  int region_raster_resolution = 128;

  void validate() const;
};

struct InteractionResult {
  double value = 0.0;
  double error_estimate = 0.0;
  double tail_bound = 0.0;
  bool converged = true;
};

// Integral of |x-y|^{-tau} over a pair of disjoint boxes. Far pairs
// (center distance > farfield_ratio * max diameter) use the midpoint rule
// with a second-order error estimate; near pairs subdivide both boxes
// dyadically; pairs still near at the depth limit use a 2^n-point tensor
// Gauss rule per box with the node distance clamped below by side/4.
void box_pair_integral(const Box& a, const Box& b, double tau,
                       const QuadratureConfig& cfg, int depth,
                       double& value, double& error);

// Memoized integrals for all cell pairs of one uniform lattice, indexed by
// the per-axis absolute index offset. Offset zero is never queried (disjoint
// sets share no cell).
class CellPairTable {
 public:
  CellPairTable(int n, double cell_size, int max_offset, double tau,
                const QuadratureConfig& cfg);

  double value(const std::array<std::int64_t, 3>& abs_offset) const;
  double error(const std::array<std::int64_t, 3>& abs_offset) const;

 private:
  int n_;
  int m_;
  std::vector<double> val_;
  std::vector<double> err_;
  std::int64_t index(const std::array<std::int64_t, 3>& abs_offset) const;
};

// A lattice sharing the cell size of a base grid, inflated symmetrically so
// that unbounded complements can be truncated with a controlled tail. All
// pair sums drawn from one workspace reuse one CellPairTable, which makes
// set-algebra identities exact regroupings of identical summands.
class LatticeWorkspace {
 public:
  LatticeWorkspace(const Box& base_window, int base_resolution,
                   const KernelParams& params, const QuadratureConfig& cfg,
                   double extra_extent);

  const Box& window() const { return window_; }
  int resolution() const { return res_; }
  double cell_size() const { return h_; }
  const KernelParams& params() const { return params_; }

  GridSet embed(const GridSet& base) const;
  GridSet raster(const Region& region) const;
  GridSet full() const;
  GridSet empty_set() const;

  // Kahan pair sum over occupied-cell pairs with canonical operand order;
  // bit-exact symmetric and deterministic for any thread count.
  double pair_sum(const GridSet& a, const GridSet& b, double& error) const;

  // Upper bound for the interaction of `a` with everything outside the
  // workspace window.
  double exterior_tail_bound(const GridSet& a) const;

 private:
  Box window_;
  int res_ = 0;
  double h_ = 0.0;
  int shift_ = 0;
  Box base_window_;
  int base_res_ = 0;
  KernelParams params_;
  std::shared_ptr<const CellPairTable> table_;
};

InteractionResult interaction(const GridSet& a, const GridSet& b,
                              const KernelParams& params,
                              const QuadratureConfig& cfg);
InteractionResult interaction(const GridSet& a, const Region& b,
                              const KernelParams& params,
                              const QuadratureConfig& cfg);
InteractionResult interaction(const Region& a, const GridSet& b,
                              const KernelParams& params,
                              const QuadratureConfig& cfg);
InteractionResult interaction(const Region& a, const Region& b,
                              const KernelParams& params,
                              const QuadratureConfig& cfg);

InteractionResult interaction_mc(const GridSet& a, const GridSet& b,
                                 const KernelParams& params,
                                 std::int64_t samples, std::uint64_t seed);
InteractionResult interaction_mc(const Region& a, const Region& b,
                                 const KernelParams& params,
                                 std::int64_t samples, std::uint64_t seed,
                                 double trim_radius = 0.0);

double tail_interaction_bound(const GridSet& a, const KernelParams& params,
                              double R);
double tail_interaction_bound(const Region& a, const KernelParams& params,
                              double R);

// Largest |x| over the support of the occupied cells (cell corners count).
double support_radius(const GridSet& a);

// Symmetric inflation (physical units) that makes the window also cover the
// ball of radius `cover` around the origin.
double extent_to_cover(const Box& window, double cover);

}  // namespace fraccap
