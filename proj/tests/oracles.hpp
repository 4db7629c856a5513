#pragma once

// Closed-form oracles used by the tests only.  They are independent of the
// library's integrator/root-finding paths: the complexified flow of a
// diagonal weighted circle action acts per component as
//   z_a -> e^{a_a tau} z_a,  w_a -> e^{-a_a tau} w_a,
// and for the all-ones action (|T|^2 = rho^2) the scalar ODEs
//   (rho^2)' = 4 x_1, x_1' = |T|^2 solve in closed form.

#include <cmath>

#include "tnut/cone.hpp"

namespace tnut::oracle {

/// Exact complexified flow endpoint for diagonal weighted actions.
inline ConePoint flow_exact(const CircleActionSpec& spec, const ConePoint& m, double tau) {
  ConePoint r = m;
  for (int a = 0; a < spec.n(); ++a) {
    const double e = std::exp(spec.weights[a] * tau);
    r.set_zw(a, m.z(a) * e, m.w(a) / e);
  }
  return r;
}

// Taubian-Calabi (all weights 1) scalars along the flow from mu^{-1}(0):
inline double tc_rho2(double rho0_sq, double tau) { return rho0_sq * std::cosh(2.0 * tau); }
inline double tc_x1(double rho0_sq, double tau) { return 0.5 * rho0_sq * std::sinh(2.0 * tau); }
inline double tc_tau(double rho0_sq, double x1) { return 0.5 * std::asinh(2.0 * x1 / rho0_sq); }
inline double tc_f(double rho0_sq, double x1) {
  return 0.5 * std::sqrt(rho0_sq * rho0_sq + 4.0 * x1 * x1) -
         x1 * std::asinh(2.0 * x1 / rho0_sq);
}

/// Phi_a^{-1} flow time for Taubian-Calabi points on mu^{-1}(x1,0,0):
/// tau solves a^2 x1(e^tau m) + tau = 0 with
/// x1(e^tau m) = x1 cosh 2tau + (rho^2/2) sinh 2tau.
inline double tc_phi_inverse_tau(double rho_sq, double x1, double a) {
  // bisection on the strictly increasing map
  double lo = -50.0, hi = 50.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double x1t = x1 * std::cosh(2 * mid) + 0.5 * rho_sq * std::sinh(2 * mid);
    ((a * a * x1t + mid > 0.0) ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace tnut::oracle
