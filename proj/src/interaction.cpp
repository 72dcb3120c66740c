#include "fraccap/interaction.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "fraccap/parallel.hpp"

namespace fraccap {

namespace {

struct Kahan {
  double sum = 0.0;
  double carry = 0.0;
  void add(double x) {
    double y = x - carry;
    double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

double center_distance(const Box& a, const Box& b) {
  double d2 = 0.0;
  for (int i = 0; i < a.n; ++i) {
    double d = 0.5 * (a.lo[i] + a.hi[i]) - 0.5 * (b.lo[i] + b.hi[i]);
    d2 += d * d;
  }
  return std::sqrt(d2);
}

double box_gap(const Box& a, const Box& b) {
  double g2 = 0.0;
  for (int i = 0; i < a.n; ++i) {
    double g = std::max({0.0, a.lo[i] - b.hi[i], b.lo[i] - a.hi[i]});
    g2 += g * g;
  }
  return std::sqrt(g2);
}

double max_side(const Box& b) {
  double s = 0.0;
  for (int i = 0; i < b.n; ++i) s = std::max(s, b.side(i));
  return s;
}

double min_side(const Box& b) {
  double s = b.side(0);
  for (int i = 1; i < b.n; ++i) s = std::min(s, b.side(i));
  return s;
}

// Second-order relative error of the midpoint rule for |x-y|^{-tau}.
double midpoint_rel_error(double tau, int n, double sa, double sb, double d) {
  double r = tau * (tau + 3.0) * n * (sa * sa + sb * sb) / (24.0 * d * d);
  return std::min(r, 1.0);
}

void subdivide(const Box& b, std::vector<Box>& out) {
  out.clear();
  int count = 1 << b.n;
  for (int mask = 0; mask < count; ++mask) {
    Box c = b;
    for (int i = 0; i < b.n; ++i) {
      double mid = 0.5 * (b.lo[i] + b.hi[i]);
      if (mask & (1 << i)) {
        c.lo[i] = mid;
      } else {
        c.hi[i] = mid;
      }
    }
    out.push_back(c);
  }
}

void tensor_rule(const Box& a, const Box& b, double tau, double& value, double& error) {
  int n = a.n;
  int nodes = 1 << n;
  double clamp = std::min(min_side(a), min_side(b)) / 4.0;
  // Two-point Gauss nodes per axis: center +- side / (2*sqrt(3)).
  const double g = 0.5 / std::sqrt(3.0);
  double sum = 0.0;
  for (int ma = 0; ma < nodes; ++ma) {
    std::array<double, 3> xa{};
    for (int i = 0; i < n; ++i) {
      double c = 0.5 * (a.lo[i] + a.hi[i]);
      xa[i] = c + ((ma & (1 << i)) ? g : -g) * a.side(i);
    }
    for (int mb = 0; mb < nodes; ++mb) {
      double d2 = 0.0;
      for (int i = 0; i < n; ++i) {
        double c = 0.5 * (b.lo[i] + b.hi[i]);
        double xb = c + ((mb & (1 << i)) ? g : -g) * b.side(i);
        double d = xa[i] - xb;
        d2 += d * d;
      }
      double d = std::max(std::sqrt(d2), clamp);
      sum += std::pow(d, -tau);
    }
  }
  double v = a.volume() * b.volume() * sum / static_cast<double>(nodes * nodes);
  value += v;
  double gap = box_gap(a, b);
  if (gap <= 1e-12 * min_side(a)) {
    error += 0.5 * v;
  } else {
    double dmin = std::max(gap, clamp);
    error += v * midpoint_rel_error(tau, n, max_side(a), max_side(b), dmin);
  }
}

}  // namespace

void QuadratureConfig::validate() const {
  if (!(rel_tol > 0.0)) throw std::invalid_argument("rel_tol must be > 0");
  if (max_subdivision_depth < 1) throw std::invalid_argument("max_subdivision_depth must be >= 1");
  if (!(farfield_ratio >= 2.0)) throw std::invalid_argument("farfield_ratio must be >= 2");
  if (!(tail_radius > 0.0)) throw std::invalid_argument("tail_radius must be > 0");
  if (region_raster_resolution < 2) throw std::invalid_argument("region_raster_resolution must be >= 2");
}

void box_pair_integral(const Box& a, const Box& b, double tau,
                       const QuadratureConfig& cfg, int depth,
                       double& value, double& error) {
  double d = center_distance(a, b);
  double diam = std::max(a.diameter(), b.diameter());
  if (d > cfg.farfield_ratio * diam) {
    double v = a.volume() * b.volume() * std::pow(d, -tau);
    value += v;
    error += v * midpoint_rel_error(tau, a.n, max_side(a), max_side(b), d);
    return;
  }
  if (depth >= cfg.max_subdivision_depth) {
    tensor_rule(a, b, tau, value, error);
    return;
  }
  std::vector<Box> ca, cb;
  subdivide(a, ca);
  subdivide(b, cb);
  for (const Box& x : ca) {
    for (const Box& y : cb) {
      box_pair_integral(x, y, tau, cfg, depth + 1, value, error);
    }
  }
}

CellPairTable::CellPairTable(int n, double cell_size, int max_offset, double tau,
                             const QuadratureConfig& cfg)
    : n_(n), m_(max_offset) {
  std::int64_t total = 1;
  for (int i = 0; i < n_; ++i) total *= m_;
  val_.assign(static_cast<std::size_t>(total), 0.0);
  err_.assign(static_cast<std::size_t>(total), 0.0);

  int chunks = 64;
  parallel_for_chunks(chunks, [&](int chunk) {
    auto range = chunk_range(total, chunks, chunk);
    for (std::int64_t idx = range.begin; idx < range.end; ++idx) {
      std::int64_t rest = idx;
      std::array<std::int64_t, 3> off{};
      for (int i = n_ - 1; i >= 0; --i) {
        off[i] = rest % m_;
        rest /= m_;
      }
      bool zero = true;
      for (int i = 0; i < n_; ++i) zero = zero && off[i] == 0;
      if (zero) continue;
      Box a, b;
      a.n = b.n = n_;
      for (int i = 0; i < n_; ++i) {
        a.lo[i] = 0.0;
        a.hi[i] = cell_size;
        b.lo[i] = static_cast<double>(off[i]) * cell_size;
        b.hi[i] = b.lo[i] + cell_size;
      }
      double v = 0.0, e = 0.0;
      box_pair_integral(a, b, tau, cfg, 0, v, e);
      val_[static_cast<std::size_t>(idx)] = v;
      err_[static_cast<std::size_t>(idx)] = e;
    }
  });
}

std::int64_t CellPairTable::index(const std::array<std::int64_t, 3>& abs_offset) const {
  std::int64_t idx = 0;
  for (int i = 0; i < n_; ++i) idx = idx * m_ + abs_offset[i];
  return idx;
}

double CellPairTable::value(const std::array<std::int64_t, 3>& abs_offset) const {
  return val_[static_cast<std::size_t>(index(abs_offset))];
}

double CellPairTable::error(const std::array<std::int64_t, 3>& abs_offset) const {
  return err_[static_cast<std::size_t>(index(abs_offset))];
}

LatticeWorkspace::LatticeWorkspace(const Box& base_window, int base_resolution,
                                   const KernelParams& params,
                                   const QuadratureConfig& cfg, double extra_extent)
    : base_window_(base_window), base_res_(base_resolution), params_(params) {
  params_.validate();
  cfg.validate();
  base_window_.validate();
  if (!base_window_.is_cube()) throw std::invalid_argument("workspace window must be a cube");
  h_ = base_window_.side(0) / base_resolution;
  shift_ = (extra_extent > 0.0)
               ? static_cast<int>(std::ceil(extra_extent / h_ - 1e-9))
               : 0;
  window_ = base_window_;
  window_.n = base_window_.n;
  for (int i = 0; i < window_.n; ++i) {
    window_.lo[i] -= shift_ * h_;
    window_.hi[i] += shift_ * h_;
  }
  res_ = base_resolution + 2 * shift_;
  table_ = std::make_shared<CellPairTable>(window_.n, h_, res_, params_.tau(), cfg);
}

GridSet LatticeWorkspace::embed(const GridSet& base) const {
  if (!same_box(base.window(), base_window_) || base.resolution() != base_res_) {
    throw std::invalid_argument("grid does not match the workspace base lattice");
  }
  GridSet out(window_, res_);
  for (std::int64_t flat : base.occupied_cells()) {
    auto c = base.cell_coords(flat);
    for (int i = 0; i < window_.n; ++i) c[i] += shift_;
    out.set(out.flat_index(c), true);
  }
  return out;
}

GridSet LatticeWorkspace::raster(const Region& region) const {
  return GridSet::rasterize(region, window_, res_);
}

GridSet LatticeWorkspace::full() const {
  GridSet out(window_, res_);
  for (std::int64_t flat = 0; flat < out.cell_count(); ++flat) out.set(flat, true);
  return out;
}

GridSet LatticeWorkspace::empty_set() const { return GridSet(window_, res_); }

double LatticeWorkspace::pair_sum(const GridSet& a, const GridSet& b, double& error) const {
  if (a.resolution() != res_ || !same_box(a.window(), window_) || !b.same_grid(a)) {
    throw std::invalid_argument("pair_sum needs grids on the workspace lattice");
  }
  const GridSet* first = &a;
  const GridSet* second = &b;
  if (second->words() < first->words()) std::swap(first, second);

  std::vector<std::int64_t> ca = first->occupied_cells();
  std::vector<std::int64_t> cb = second->occupied_cells();
  if (ca.empty() || cb.empty()) {
    error = 0.0;
    return 0.0;
  }
  int n = window_.n;
  std::vector<std::array<std::int64_t, 3>> xa(ca.size()), xb(cb.size());
  for (std::size_t i = 0; i < ca.size(); ++i) xa[i] = first->cell_coords(ca[i]);
  for (std::size_t i = 0; i < cb.size(); ++i) xb[i] = second->cell_coords(cb[i]);

  const int chunks = 64;
  std::vector<Kahan> vsum(chunks), esum(chunks);
  const CellPairTable& table = *table_;
  parallel_for_chunks(chunks, [&](int chunk) {
    auto range = chunk_range(static_cast<std::int64_t>(xa.size()), chunks, chunk);
    Kahan v, e;
    for (std::int64_t i = range.begin; i < range.end; ++i) {
      const auto& pa = xa[static_cast<std::size_t>(i)];
      for (const auto& pb : xb) {
        std::array<std::int64_t, 3> off{};
        for (int k = 0; k < n; ++k) off[k] = std::abs(pa[k] - pb[k]);
        v.add(table.value(off));
        e.add(table.error(off));
      }
    }
    vsum[static_cast<std::size_t>(chunk)] = v;
    esum[static_cast<std::size_t>(chunk)] = e;
  });
  Kahan v, e;
  for (int c = 0; c < chunks; ++c) {
    v.add(vsum[static_cast<std::size_t>(c)].sum);
    e.add(esum[static_cast<std::size_t>(c)].sum);
  }
  error = e.sum;
  return v.sum;
}

double LatticeWorkspace::exterior_tail_bound(const GridSet& a) const {
  if (a.occupied_count() == 0) return 0.0;
  int n = window_.n;
  std::array<double, 3> amin{}, amax{};
  for (int i = 0; i < n; ++i) {
    amin[i] = window_.hi[i];
    amax[i] = window_.lo[i];
  }
  for (std::int64_t flat : a.occupied_cells()) {
    Box cb = a.cell_box(flat);
    for (int i = 0; i < n; ++i) {
      amin[i] = std::min(amin[i], cb.lo[i]);
      amax[i] = std::max(amax[i], cb.hi[i]);
    }
  }
  double g = window_.hi[0] - window_.lo[0];
  for (int i = 0; i < n; ++i) {
    g = std::min(g, window_.hi[i] - amax[i]);
    g = std::min(g, amin[i] - window_.lo[i]);
  }
  if (!(g > 0.0)) throw std::invalid_argument("no tail margin around the data");
  double s = params_.s;
  return a.measure() * unit_sphere_area(n) * std::pow(g, -s) / s;
}

namespace {

InteractionResult finish(double value, double error, double tail, double rel_tol) {
  InteractionResult r;
  r.value = value;
  r.error_estimate = error;
  r.tail_bound = tail;
  r.converged = value == 0.0 || error <= rel_tol * value;
  return r;
}

}  // namespace

double extent_to_cover(const Box& window, double cover) {
  double extra = 0.0;
  for (int i = 0; i < window.n; ++i) {
    extra = std::max(extra, cover - window.hi[i]);
    extra = std::max(extra, window.lo[i] + cover);
  }
  return extra;
}

InteractionResult interaction(const GridSet& a, const GridSet& b,
                              const KernelParams& params, const QuadratureConfig& cfg) {
  params.validate();
  cfg.validate();
  if (a.same_grid(b)) {
    if (boolean_op(a, b, BoolOp::Intersect).occupied_count() != 0) {
      throw std::invalid_argument("interaction arguments overlap");
    }
    LatticeWorkspace ws(a.window(), a.resolution(), params, cfg, 0.0);
    double err = 0.0;
    double v = ws.pair_sum(a, b, err);
    return finish(v, err, 0.0, cfg.rel_tol);
  }
  // Cross-grid path: direct box-pair quadrature per occupied-cell pair.
  for (std::int64_t flat : a.occupied_cells()) {
    if (b.contains_point(a.cell_center(flat))) throw std::invalid_argument("interaction arguments overlap");
  }
  for (std::int64_t flat : b.occupied_cells()) {
    if (a.contains_point(b.cell_center(flat))) throw std::invalid_argument("interaction arguments overlap");
  }
  std::vector<std::int64_t> ca = a.occupied_cells();
  std::vector<std::int64_t> cb = b.occupied_cells();
  if (ca.empty() || cb.empty()) return finish(0.0, 0.0, 0.0, cfg.rel_tol);
  const int chunks = 64;
  std::vector<Kahan> vsum(chunks), esum(chunks);
  double tau = params.tau();
  parallel_for_chunks(chunks, [&](int chunk) {
    auto range = chunk_range(static_cast<std::int64_t>(ca.size()), chunks, chunk);
    Kahan v, e;
    for (std::int64_t i = range.begin; i < range.end; ++i) {
      Box ba = a.cell_box(ca[static_cast<std::size_t>(i)]);
      for (std::int64_t fb : cb) {
        double pv = 0.0, pe = 0.0;
        box_pair_integral(ba, b.cell_box(fb), tau, cfg, 0, pv, pe);
        v.add(pv);
        e.add(pe);
      }
    }
    vsum[static_cast<std::size_t>(chunk)] = v;
    esum[static_cast<std::size_t>(chunk)] = e;
  });
  Kahan v, e;
  for (int c = 0; c < chunks; ++c) {
    v.add(vsum[static_cast<std::size_t>(c)].sum);
    e.add(esum[static_cast<std::size_t>(c)].sum);
  }
  return finish(v.sum, e.sum, 0.0, cfg.rel_tol);
}

InteractionResult interaction(const GridSet& a, const Region& b,
                              const KernelParams& params, const QuadratureConfig& cfg) {
  params.validate();
  cfg.validate();
  auto rb = b.bounded_radius();
  double extra = rb ? extent_to_cover(a.window(), *rb) : cfg.tail_radius;
  LatticeWorkspace ws(a.window(), a.resolution(), params, cfg, extra);
  GridSet A = ws.embed(a);
  GridSet B = ws.raster(b);
  if (boolean_op(A, B, BoolOp::Intersect).occupied_count() != 0) {
    throw std::invalid_argument("interaction arguments overlap");
  }
  double err = 0.0;
  double v = ws.pair_sum(A, B, err);
  double tail = rb ? 0.0 : ws.exterior_tail_bound(A);
  return finish(v, err, tail, cfg.rel_tol);
}

InteractionResult interaction(const Region& a, const GridSet& b,
                              const KernelParams& params, const QuadratureConfig& cfg) {
  return interaction(b, a, params, cfg);
}

InteractionResult interaction(const Region& a, const Region& b,
                              const KernelParams& params, const QuadratureConfig& cfg) {
  params.validate();
  cfg.validate();
  auto ra = a.bounded_radius();
  auto rb = b.bounded_radius();
  if (!ra && rb) return interaction(b, a, params, cfg);

  int res = cfg.region_raster_resolution;
  Box base;
  double extra = 0.0;
  bool tail_b = false;
  if (ra && rb) {
    base = Box::cube(params.n, std::max(*ra, *rb));
  } else if (ra) {
    base = Box::cube(params.n, *ra);
    extra = cfg.tail_radius;
    tail_b = true;
  } else {
    // Both unbounded: the first argument is truncated to the base cube (that
    // truncation itself is not covered by any bound, and the full quantity
    // may be infinite); tail_bound covers the second argument's part beyond
    // the working lattice only.
    base = Box::cube(params.n, cfg.tail_radius);
    extra = cfg.tail_radius;
    tail_b = true;
  }
  LatticeWorkspace ws(base, res, params, cfg, extra);
  // Rasterizing on the base window trims an unbounded first argument.
  GridSet A = ws.embed(GridSet::rasterize(a, base, res));
  GridSet B = ws.raster(b);
  if (boolean_op(A, B, BoolOp::Intersect).occupied_count() != 0) {
    throw std::invalid_argument("interaction arguments overlap");
  }
  double err = 0.0;
  double v = ws.pair_sum(A, B, err);
  double tail = tail_b ? ws.exterior_tail_bound(A) : 0.0;
  return finish(v, err, tail, cfg.rel_tol);
}

namespace {

double u01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

InteractionResult mc_finish(double meas_product, double sum, double sumsq, std::int64_t n,
                            double tail) {
  double mean = sum / static_cast<double>(n);
  InteractionResult r;
  r.value = meas_product * mean;
  double var = sumsq / static_cast<double>(n) - mean * mean;
  if (n > 1 && var > 0.0) {
    r.error_estimate = 3.0 * meas_product * std::sqrt(var / static_cast<double>(n - 1));
  } else {
    r.error_estimate = r.value;
  }
  r.tail_bound = tail;
  r.converged = true;
  return r;
}

}  // namespace

InteractionResult interaction_mc(const GridSet& a, const GridSet& b,
                                 const KernelParams& params, std::int64_t samples,
                                 std::uint64_t seed) {
  params.validate();
  if (samples < 1) throw std::invalid_argument("samples must be >= 1");
  if (a.occupied_count() == 0 || b.occupied_count() == 0) return InteractionResult{};
  std::vector<std::int64_t> ca = a.occupied_cells();
  std::vector<std::int64_t> cb = b.occupied_cells();
  double tau = params.tau();
  int n = a.dim();
  std::mt19937_64 rng(seed);
  double sum = 0.0, sumsq = 0.0;
  for (std::int64_t k = 0; k < samples; ++k) {
    auto pa = a.cell_center(ca[static_cast<std::size_t>(rng() % ca.size())]);
    auto pb = b.cell_center(cb[static_cast<std::size_t>(rng() % cb.size())]);
    double d2 = 0.0;
    for (int i = 0; i < n; ++i) {
      double xa = pa[i] + (u01(rng) - 0.5) * a.cell_size();
      double xb = pb[i] + (u01(rng) - 0.5) * b.cell_size();
      d2 += (xa - xb) * (xa - xb);
    }
    double f = std::pow(d2, -0.5 * tau);
    sum += f;
    sumsq += f * f;
  }
  return mc_finish(a.measure() * b.measure(), sum, sumsq, samples, 0.0);
}

InteractionResult interaction_mc(const Region& a, const Region& b,
                                 const KernelParams& params, std::int64_t samples,
                                 std::uint64_t seed, double trim_radius) {
  params.validate();
  if (samples < 1) throw std::invalid_argument("samples must be >= 1");
  auto ra = a.bounded_radius();
  auto rb = b.bounded_radius();
  double La = ra ? *ra : trim_radius;
  double Lb = rb ? *rb : trim_radius;
  if (!(La > 0.0) || !(Lb > 0.0)) {
    throw std::invalid_argument("unbounded region needs a positive trim radius");
  }
  int n = params.n;
  double tau = params.tau();
  double vol_a = std::pow(2.0 * La, n);
  double vol_b = std::pow(2.0 * Lb, n);
  std::mt19937_64 rng(seed);
  double sum = 0.0, sumsq = 0.0;
  for (std::int64_t k = 0; k < samples; ++k) {
    std::array<double, 3> xa{}, xb{};
    for (int i = 0; i < n; ++i) xa[i] = (2.0 * u01(rng) - 1.0) * La;
    for (int i = 0; i < n; ++i) xb[i] = (2.0 * u01(rng) - 1.0) * Lb;
    double f = 0.0;
    if (a.contains(xa, n) && b.contains(xb, n)) {
      double d2 = 0.0;
      for (int i = 0; i < n; ++i) d2 += (xa[i] - xb[i]) * (xa[i] - xb[i]);
      f = std::pow(d2, -0.5 * tau);
    }
    sum += f;
    sumsq += f * f;
  }
  double tail = 0.0;
  if (!ra || !rb) {
    // Cross tail of the kept cube against the trimmed exterior.
    double g = trim_radius - std::min(La, Lb) * std::sqrt(static_cast<double>(n));
    if (g > 0.0) {
      tail = std::min(vol_a, vol_b) * unit_sphere_area(n) * std::pow(g, -params.s) / params.s;
    }
  }
  return mc_finish(vol_a * vol_b, sum, sumsq, samples, tail);
}

double support_radius(const GridSet& a) {
  double r2max = 0.0;
  int n = a.dim();
  double half = a.cell_size() / 2.0;
  for (std::int64_t flat : a.occupied_cells()) {
    auto c = a.cell_center(flat);
    double r2 = 0.0;
    for (int i = 0; i < n; ++i) {
      double v = std::abs(c[i]) + half;
      r2 += v * v;
    }
    r2max = std::max(r2max, r2);
  }
  return std::sqrt(r2max);
}

double tail_interaction_bound(const GridSet& a, const KernelParams& params, double R) {
  params.validate();
  if (!(R > 0.0)) throw std::invalid_argument("R must be > 0");
  if (a.occupied_count() == 0) return 0.0;
  if (support_radius(a) > R / 2.0) {
    throw std::invalid_argument("set is not contained in the half-radius ball");
  }
  return a.measure() * unit_sphere_area(params.n) * std::pow(R / 2.0, -params.s) / params.s;
}

double tail_interaction_bound(const Region& a, const KernelParams& params, double R) {
  params.validate();
  if (!(R > 0.0)) throw std::invalid_argument("R must be > 0");
  auto ra = a.bounded_radius();
  if (!ra || *ra > R / 2.0) {
    throw std::invalid_argument("region is not provably inside the half-radius ball");
  }
  GridSet g = GridSet::rasterize(a, Box::cube(params.n, *ra), 256);
  return g.measure() * unit_sphere_area(params.n) * std::pow(R / 2.0, -params.s) / params.s;
}

}  // namespace fraccap
