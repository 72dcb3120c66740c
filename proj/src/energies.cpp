#include "fraccap/energies.hpp"

#include <cmath>
#include <stdexcept>

namespace fraccap {

namespace {

InteractionResult pair_result(const LatticeWorkspace& ws, const GridSet& a, const GridSet& b,
                              double rel_tol) {
  InteractionResult r;
  r.value = ws.pair_sum(a, b, r.error_estimate);
  r.converged = r.value == 0.0 || r.error_estimate <= rel_tol * r.value;
  return r;
}

InteractionResult combine(std::initializer_list<InteractionResult> parts) {
  InteractionResult out;
  for (const auto& p : parts) {
    out.value += p.value;
    out.error_estimate += p.error_estimate;
    out.tail_bound += p.tail_bound;
    out.converged = out.converged && p.converged;
  }
  return out;
}

EnergyBreakdown perimeter_terms(const LatticeWorkspace& ws, const GridSet& F_in,
                                const GridSet& Om, bool omega_unbounded, double rel_tol) {
  GridSet full = ws.full();
  GridSet FOm = boolean_op(F_in, Om, BoolOp::Intersect);
  GridSet FcOm = boolean_op(Om, F_in, BoolOp::Difference);
  GridSet FOmc = boolean_op(F_in, Om, BoolOp::Difference);
  GridSet FcOmc = boolean_op(full, boolean_op(F_in, Om, BoolOp::Union), BoolOp::Difference);

  EnergyTerm t1{"I(F om, F^c om)", 1.0, pair_result(ws, FOm, FcOm, rel_tol)};
  EnergyTerm t2{"I(F om, F^c om^c)", 1.0, pair_result(ws, FOm, FcOmc, rel_tol)};
  EnergyTerm t3{"I(F om^c, F^c om)", 1.0, pair_result(ws, FOmc, FcOm, rel_tol)};
  t2.result.tail_bound = FOm.occupied_count() ? ws.exterior_tail_bound(FOm) : 0.0;
  if (omega_unbounded) {
    t1.result.tail_bound = t2.result.tail_bound;
    t3.result.tail_bound = FOmc.occupied_count() ? ws.exterior_tail_bound(FOmc) : 0.0;
  }
  return assemble_breakdown({t1, t2, t3});
}

}  // namespace

EnergyBreakdown assemble_breakdown(std::vector<EnergyTerm> terms) {
  EnergyBreakdown out;
  out.terms = std::move(terms);
  for (const EnergyTerm& t : out.terms) {
    out.total += t.coefficient * t.result.value;
    out.error_estimate += std::abs(t.coefficient) * t.result.error_estimate;
    out.tail_bound += std::abs(t.coefficient) * t.result.tail_bound;
  }
  return out;
}

EnergyBreakdown capillarity_energy(const GridSet& E, const GridSet& omega,
                                   const KernelParams& params, const QuadratureConfig& cfg) {
  params.validate();
  cfg.validate();
  if (!E.subset_of(omega)) throw std::invalid_argument("E must be contained in omega");
  LatticeWorkspace ws(E.window(), E.resolution(), params, cfg, cfg.tail_radius);
  GridSet Ee = ws.embed(E);
  GridSet Om = ws.embed(omega);
  GridSet EcOm = boolean_op(Om, Ee, BoolOp::Difference);
  GridSet OmC = boolean_op(ws.full(), Om, BoolOp::Difference);

  EnergyTerm t1{"I(E, E^c om)", 1.0, pair_result(ws, Ee, EcOm, cfg.rel_tol)};
  EnergyTerm t2{"I(E, om^c)", params.sigma, pair_result(ws, Ee, OmC, cfg.rel_tol)};
  t2.result.tail_bound = Ee.occupied_count() ? ws.exterior_tail_bound(Ee) : 0.0;
  return assemble_breakdown({t1, t2});
}

EnergyBreakdown capillarity_energy(const GridSet& E, const Region& omega,
                                   const KernelParams& params, const QuadratureConfig& cfg) {
  params.validate();
  cfg.validate();
  for (std::int64_t flat : E.occupied_cells()) {
    if (!omega.contains(E.cell_center(flat), E.dim())) {
      throw std::invalid_argument("E must be contained in omega");
    }
  }
  auto rb = omega.bounded_radius();
  double extra = cfg.tail_radius;
  if (rb) extra = std::max(extra, extent_to_cover(E.window(), *rb));
  LatticeWorkspace ws(E.window(), E.resolution(), params, cfg, extra);
  GridSet Ee = ws.embed(E);
  GridSet Om = ws.raster(omega);
  GridSet EcOm = boolean_op(Om, Ee, BoolOp::Difference);
  GridSet OmC = boolean_op(ws.full(), Om, BoolOp::Difference);

  EnergyTerm t1{"I(E, E^c om)", 1.0, pair_result(ws, Ee, EcOm, cfg.rel_tol)};
  EnergyTerm t2{"I(E, om^c)", params.sigma, pair_result(ws, Ee, OmC, cfg.rel_tol)};
  t2.result.tail_bound = Ee.occupied_count() ? ws.exterior_tail_bound(Ee) : 0.0;
  return assemble_breakdown({t1, t2});
}

EnergyBreakdown fractional_perimeter(const GridSet& F, const GridSet& omega,
                                     const KernelParams& params, const QuadratureConfig& cfg) {
  params.validate();
  cfg.validate();
  LatticeWorkspace ws(F.window(), F.resolution(), params, cfg, cfg.tail_radius);
  return perimeter_terms(ws, ws.embed(F), ws.embed(omega), false, cfg.rel_tol);
}

EnergyBreakdown fractional_perimeter(const GridSet& F, const Region& omega,
                                     const KernelParams& params, const QuadratureConfig& cfg) {
  params.validate();
  cfg.validate();
  auto rb = omega.bounded_radius();
  double extra = cfg.tail_radius;
  if (rb) extra = std::max(extra, extent_to_cover(F.window(), *rb));
  LatticeWorkspace ws(F.window(), F.resolution(), params, cfg, extra);
  return perimeter_terms(ws, ws.embed(F), ws.raster(omega), !rb.has_value(), cfg.rel_tol);
}

EnergyBreakdown fractional_perimeter_complement(const GridSet& F, const Region& omega,
                                                const KernelParams& params,
                                                const QuadratureConfig& cfg) {
  params.validate();
  cfg.validate();
  auto rb = omega.bounded_radius();
  double extra = cfg.tail_radius;
  if (rb) extra = std::max(extra, extent_to_cover(F.window(), *rb));
  LatticeWorkspace ws(F.window(), F.resolution(), params, cfg, extra);
  GridSet G = boolean_op(ws.full(), ws.embed(F), BoolOp::Difference);
  return perimeter_terms(ws, G, ws.raster(omega), !rb.has_value(), cfg.rel_tol);
}

HalfspaceEnergySystem::HalfspaceEnergySystem(const GridSet& F, const KernelParams& params,
                                             const QuadratureConfig& cfg, double cover_radius)
    : params_(params),
      ws_(F.window(), F.resolution(), params, cfg,
          std::max(cfg.tail_radius, extent_to_cover(F.window(), cover_radius))),
      F_(ws_.embed(F)),
      H_(ws_.raster(Region::halfspace())),
      Hc_(boolean_op(ws_.full(), H_, BoolOp::Difference)),
      full_(ws_.full()) {
  params_.validate();
  cfg.validate();
  if (!F.subset_of_upper_halfspace()) {
    throw std::invalid_argument("set must lie in the upper half-space");
  }
  rel_tol_ = cfg.rel_tol;
}

const HalfspaceEnergySystem::Atoms& HalfspaceEnergySystem::atoms(double R) const {
  auto it = memo_.find(R);
  if (it != memo_.end()) return it->second;
  if (!(R > 0.0)) throw std::invalid_argument("radius must be > 0");

  GridSet Ball = ws_.raster(Region::ball(R));
  GridSet FB = boolean_op(F_, Ball, BoolOp::Intersect);
  GridSet FBc = boolean_op(F_, Ball, BoolOp::Difference);
  GridSet BH = boolean_op(Ball, H_, BoolOp::Intersect);
  GridSet FcBH = boolean_op(BH, F_, BoolOp::Difference);
  GridSet BHc = boolean_op(Ball, H_, BoolOp::Difference);
  GridSet BcH = boolean_op(H_, Ball, BoolOp::Difference);
  GridSet FcBcH = boolean_op(BcH, F_, BoolOp::Difference);
  GridSet BcHc = boolean_op(Hc_, Ball, BoolOp::Difference);

  Atoms out;
  out.a = pair_result(ws_, FB, FcBH, rel_tol_);
  out.a2 = pair_result(ws_, FB, BHc, rel_tol_);
  out.b = pair_result(ws_, FB, FcBcH, rel_tol_);
  out.b2 = pair_result(ws_, FB, BcHc, rel_tol_);
  out.d = pair_result(ws_, FBc, FcBH, rel_tol_);
  out.d2 = pair_result(ws_, FBc, BHc, rel_tol_);
  out.tail_fb = FB.occupied_count() ? ws_.exterior_tail_bound(FB) : 0.0;
  out.tail_fbc = FBc.occupied_count() ? ws_.exterior_tail_bound(FBc) : 0.0;
  return memo_.emplace(R, std::move(out)).first->second;
}

EnergyBreakdown HalfspaceEnergySystem::per_s_sigma(double R) const {
  const Atoms& at = atoms(R);
  EnergyTerm t1{"Per(F, B_R H)", 1.0,
                combine({at.a, at.b, at.a2, at.b2, at.d})};
  t1.result.tail_bound += at.tail_fb;
  EnergyTerm t2{"I(F B_R, H^c)", params_.sigma - 1.0, combine({at.a2, at.b2})};
  t2.result.tail_bound += at.tail_fb;
  return assemble_breakdown({t1, t2});
}

EnergyBreakdown HalfspaceEnergySystem::minimizer_comparison(double R) const {
  const Atoms& at = atoms(R);
  EnergyTerm t1{"I(F B_R, F^c H)", 1.0, combine({at.a, at.b})};
  t1.result.tail_bound += at.tail_fb;
  EnergyTerm t2{"I(F B_R^c, F^c B_R H)", 1.0, at.d};
  EnergyTerm t3{"I(F B_R, H^c)", params_.sigma, combine({at.a2, at.b2})};
  t3.result.tail_bound += at.tail_fb;
  return assemble_breakdown({t1, t2, t3});
}

EnergyBreakdown HalfspaceEnergySystem::perimeter_ball(double R) const {
  const Atoms& at = atoms(R);
  EnergyTerm t1{"I(F B_R, F^c B_R)", 1.0, combine({at.a, at.a2})};
  EnergyTerm t2{"I(F B_R, F^c B_R^c)", 1.0, combine({at.b, at.b2})};
  t2.result.tail_bound += at.tail_fb;
  EnergyTerm t3{"I(F B_R^c, F^c B_R)", 1.0, combine({at.d, at.d2})};
  return assemble_breakdown({t1, t2, t3});
}

EnergyBreakdown HalfspaceEnergySystem::perimeter_half_ball(double R) const {
  const Atoms& at = atoms(R);
  EnergyTerm t1{"I(F B_R H, F^c B_R H)", 1.0, at.a};
  EnergyTerm t2{"I(F B_R H, F^c (B_R H)^c)", 1.0, combine({at.b, at.a2, at.b2})};
  t2.result.tail_bound += at.tail_fb;
  EnergyTerm t3{"I(F (B_R H)^c, F^c B_R H)", 1.0, at.d};
  return assemble_breakdown({t1, t2, t3});
}

InteractionResult HalfspaceEnergySystem::wall_term(double R) const { return atoms(R).d2; }

InteractionResult HalfspaceEnergySystem::wetting_term(double R) const {
  const Atoms& at = atoms(R);
  InteractionResult r = combine({at.a2, at.b2});
  r.tail_bound += at.tail_fb;
  return r;
}

}  // namespace fraccap
