#include "fraccap/quadrature.hpp"

#include <cmath>

namespace fraccap {

namespace {

struct SimpsonPanel {
  double value = 0.0;
  double error = 0.0;
  bool converged = true;
};

SimpsonPanel simpson_recurse(const std::function<double(double)>& f,
                             double a, double m, double b,
                             double fa, double fm, double fb,
                             double whole, double tol, int depth) {
  double lm = 0.5 * (a + m);
  double rm = 0.5 * (m + b);
  double flm = f(lm);
  double frm = f(rm);
  double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  double delta = left + right - whole;
  if (std::abs(delta) <= 15.0 * tol || depth <= 0) {
    SimpsonPanel p;
    p.value = left + right + delta / 15.0;
    p.error = std::abs(delta) / 15.0;
    p.converged = (std::abs(delta) <= 15.0 * tol) || std::abs(delta) == 0.0;
    return p;
  }
  SimpsonPanel l = simpson_recurse(f, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth - 1);
  SimpsonPanel r = simpson_recurse(f, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
  SimpsonPanel p;
  p.value = l.value + r.value;
  p.error = l.error + r.error;
  p.converged = l.converged && r.converged;
  return p;
}

}  // namespace

QuadResult adaptive_simpson(const std::function<double(double)>& f,
                            double a, double b, double abs_tol, int max_depth) {
  QuadResult out;
  if (a == b) return out;
  double m = 0.5 * (a + b);
  double fa = f(a);
  double fm = f(m);
  double fb = f(b);
  double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  SimpsonPanel p = simpson_recurse(f, a, m, b, fa, fm, fb, whole, abs_tol, max_depth);
  out.value = p.value;
  out.error = p.error;
  out.converged = p.converged;
  return out;
}

}  // namespace fraccap
