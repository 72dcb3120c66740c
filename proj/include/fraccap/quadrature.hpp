#pragma once

#include <functional>

namespace fraccap {

struct QuadResult {
  double value = 0.0;
  double error = 0.0;   // accumulated local error estimate
  bool converged = true;
};

// Recursive adaptive Simpson on [a, b]. Stops a subinterval once the local
// Richardson estimate |S2 - S1|/15 is below its share of abs_tol, or the depth
// limit is hit (then converged = false and the residual is added to error).
QuadResult adaptive_simpson(const std::function<double(double)>& f,
                            double a, double b, double abs_tol, int max_depth = 48);

}  // namespace fraccap
