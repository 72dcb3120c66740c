#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "fraccap/geometry.hpp"
#include "fraccap/interaction.hpp"

namespace fraccap {

struct EnergyTerm {
  std::string label;
  double coefficient = 1.0;
  InteractionResult result;
};

struct EnergyBreakdown {
  std::vector<EnergyTerm> terms;
  double total = 0.0;           // sum of coefficient * value in term order
  double error_estimate = 0.0;  // sum of |coefficient| * error
  double tail_bound = 0.0;      // sum of |coefficient| * tail
};

EnergyBreakdown assemble_breakdown(std::vector<EnergyTerm> terms);

// C(E, omega) = I(E, E^c omega) + sigma * I(E, omega^c), requiring E within
// omega. The omega^c term is truncated at the working lattice with the
// remainder in tail_bound.
EnergyBreakdown capillarity_energy(const GridSet& E, const GridSet& omega,
                                   const KernelParams& params,
                                   const QuadratureConfig& cfg);
EnergyBreakdown capillarity_energy(const GridSet& E, const Region& omega,
                                   const KernelParams& params,
                                   const QuadratureConfig& cfg);

// Per(F, omega) = I(F omega, F^c omega) + I(F omega, F^c omega^c)
//               + I(F omega^c, F^c omega), complements taken in the
// truncated working universe, truncation remainder in tail_bound.
EnergyBreakdown fractional_perimeter(const GridSet& F, const GridSet& omega,
                                     const KernelParams& params,
                                     const QuadratureConfig& cfg);
EnergyBreakdown fractional_perimeter(const GridSet& F, const Region& omega,
                                     const KernelParams& params,
                                     const QuadratureConfig& cfg);

// Same functional evaluated for the working-universe complement of F; term
// for term equal to fractional_perimeter(F, ...) by the F <-> F^c symmetry
// of the definition.
EnergyBreakdown fractional_perimeter_complement(const GridSet& F, const Region& omega,
                                                const KernelParams& params,
                                                const QuadratureConfig& cfg);

// Halfspace-localized energies of one set F within H, all assembled from six
// memoized interaction atoms per radius on one shared lattice. Identities
// among these energies are exact regroupings of identical summands:
//   per_s_sigma(R)         = minimizer_comparison(R)
//   perimeter_ball(R) - perimeter_half_ball(R) = wall_term(R)
// and perimeter differences of two sets agreeing outside B_R telescope.
class HalfspaceEnergySystem {
 public:
  // cover_radius: largest ball radius any energy of this system must contain.
  HalfspaceEnergySystem(const GridSet& F, const KernelParams& params,
                        const QuadratureConfig& cfg, double cover_radius);

  // Per(F, B_R H) + (sigma - 1) I(F B_R, H^c).
  EnergyBreakdown per_s_sigma(double R) const;
  // I(F B_R, F^c H) + I(F B_R^c, F^c B_R H) + sigma I(F B_R, H^c).
  EnergyBreakdown minimizer_comparison(double R) const;
  // Per(F, B_R).
  EnergyBreakdown perimeter_ball(double R) const;
  // Per(F, B_R H).
  EnergyBreakdown perimeter_half_ball(double R) const;
  // I(F B_R^c, B_R H^c).
  InteractionResult wall_term(double R) const;
  // I(F B_R, H^c), the wetting interaction.
  InteractionResult wetting_term(double R) const;

  const LatticeWorkspace& workspace() const { return ws_; }
  const GridSet& embedded_set() const { return F_; }

 private:
  struct Atoms {
    // Pairwise interactions of the partition cells induced by F, B_R, H:
    //   a   = I(F B_R,   F^c B_R H)      a2 = I(F B_R,   B_R H^c)
    //   b   = I(F B_R,   F^c B_R^c H)    b2 = I(F B_R,   B_R^c H^c)
    //   d   = I(F B_R^c, F^c B_R H)      d2 = I(F B_R^c, B_R H^c)
    InteractionResult a, a2, b, b2, d, d2;
    double tail_fb = 0.0;   // exterior bound for F B_R
    double tail_fbc = 0.0;  // exterior bound for F B_R^c
  };

  const Atoms& atoms(double R) const;

  KernelParams params_;
  LatticeWorkspace ws_;
  GridSet F_;
  GridSet H_;
  GridSet Hc_;
  GridSet full_;
  double rel_tol_ = 1e-3;
  mutable std::map<double, Atoms> memo_;
};

}  // namespace fraccap
