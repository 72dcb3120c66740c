#pragma once

#include <stdexcept>
#include <string>

namespace fraccap {

// Parameters of the fractional interaction kernel |x - y|^{-(n+s)} and of the
// relative adhesion coefficient sigma in the capillarity energy.
//
//   n      ambient dimension (n = 2 is the fully exercised path; n = 1 and
//          n = 3 are supported for interaction/energy evaluation)
//   s      fractional order, 0 < s < 1
//   sigma  relative adhesion coefficient, -1 < sigma < 1
struct KernelParams {
  int n = 2;
  double s = 0.5;
  double sigma = 0.0;

  // Kernel exponent: |x - y|^{-tau} with tau = n + s.
  double tau() const { return static_cast<double>(n) + s; }

  void validate() const {
    if (n < 1 || n > 3) {
      throw std::invalid_argument("KernelParams: n must be 1, 2, or 3, got " + std::to_string(n));
    }
    if (!(s > 0.0) || !(s < 1.0)) {
      throw std::invalid_argument("KernelParams: s must lie in (0,1), got " + std::to_string(s));
    }
    if (!(sigma > -1.0) || !(sigma < 1.0)) {
      throw std::invalid_argument("KernelParams: sigma must lie in (-1,1), got " + std::to_string(sigma));
    }
  }
};

// Surface measure of the unit sphere S^{n-1} in R^n.
inline double unit_sphere_area(int n) {
  switch (n) {
    case 1: return 2.0;
    case 2: return 6.283185307179586476925287;   // 2*pi
    case 3: return 12.56637061435917295385057;   // 4*pi
    default: throw std::invalid_argument("unit_sphere_area: unsupported dimension");
  }
}

}  // namespace fraccap
