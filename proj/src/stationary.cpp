#include "ringbumps/stationary.hpp"

#include <algorithm>
#include <cmath>

namespace ringbumps {

HeavisideRoots heaviside_fixed_points(double rho) {
  if (std::abs(rho) > 1.0)
    throw NoNonzeroSolution("no nonzero amplitude for |rho| > 1");
  HeavisideRoots r;
  r.zero = 0.0;
  r.lower = std::sqrt(1.0 + rho) - std::sqrt(1.0 - rho);
  r.upper = std::sqrt(1.0 + rho) + std::sqrt(1.0 - rho);
  return r;
}

int quad_points_for(const FiringFunction& f) {
  if (f.kind == FiringKind::Heaviside) return 512;
  // the analyticity strip of f'(a cos) has half-width ~ pi*kappa/A; keep
  // m large enough that the rectangle rule is converged to machine precision
  double target = 64.0 / f.kappa;
  int m = 512;
  while (m < target && m < 65536) m *= 2;
  return m;
}

double amplitude_map(const FiringFunction& f, double a) {
  if (f.kind == FiringKind::Heaviside) {
    if (a <= 0.0 || std::abs(f.rho) > a) return 0.0;
    double q = f.rho / a;
    return 2.0 * std::sqrt(1.0 - q * q);
  }
  static thread_local QuadGrid cache;
  int m = quad_points_for(f);
  if (cache.m != m) cache = QuadGrid::make(m);
  return quad_integrate(cache, cache.cosx * f(a * cache.cosx));
}

std::vector<double> amplitude_roots(const FiringFunction& f) {
  // G(a) - a is negative as a -> 0+ (G'(0) = pi f'(0) << 1), so starting just
  // above zero adds no spurious crossing; the sigmoid's smallest root can sit
  // below |rho|, unlike the Heaviside one
  const double lo = 1e-6;
  const double hi = 4.0;  // G <= int |cos| = 4 bounds every root
  const int n_scan = 400;
  auto r = [&](double a) { return amplitude_map(f, a) - a; };

  std::vector<double> roots;
  double a0 = lo, r0 = r(a0);
  for (int k = 1; k <= n_scan; ++k) {
    double a1 = lo + (hi - lo) * k / n_scan;
    double r1 = r(a1);
    if (r0 == 0.0) {
      roots.push_back(a0);
    } else if (r0 * r1 < 0.0) {
      double x0 = a0, x1 = a1, f0 = r0;
      for (int it = 0; it < 200 && (x1 - x0) > 1e-15 * hi; ++it) {
        double xm = 0.5 * (x0 + x1);
        double fm = r(xm);
        if (fm == 0.0) { x0 = x1 = xm; break; }
        if (f0 * fm < 0.0) x1 = xm;
        else { x0 = xm; f0 = fm; }
      }
      roots.push_back(0.5 * (x0 + x1));
    }
    a0 = a1;
    r0 = r1;
  }
  return roots;
}

double bump_sigma(const FiringFunction& f, double a) {
  if (f.kind == FiringKind::Heaviside) {
    if (a <= 0.0 || std::abs(f.rho) > a) return 0.0;
    double xc = std::acos(f.rho / a);
    return std::sqrt(kTwoPi * (xc - 0.5 * std::sin(2.0 * xc)));
  }
  static thread_local QuadGrid cache;
  int m = quad_points_for(f);
  if (cache.m != m) cache = QuadGrid::make(m);
  double s2 = quad_integrate(cache, cache.sinx.square() * f(a * cache.cosx));
  return std::sqrt(std::max(0.0, kTwoPi * s2));
}

double bump_i1(const FiringFunction& f, double a) {
  if (f.kind == FiringKind::Heaviside) {
    // delta-weight limit: two crossings, Jacobian A sin(xc) each
    double q = f.rho / a;
    return 2.0 / (a * std::sqrt(1.0 - q * q));
  }
  static thread_local QuadGrid cache;
  int m = quad_points_for(f);
  if (cache.m != m) cache = QuadGrid::make(m);
  return quad_integrate(cache, f.deriv(a * cache.cosx));
}

BumpSolution solve_amplitude(const FiringFunction& f, Branch branch) {
  BumpSolution sol;
  sol.f = f;
  if (f.kind == FiringKind::Heaviside) {
    auto roots = heaviside_fixed_points(f.rho);
    sol.amplitude = branch == Branch::Largest ? roots.upper : roots.lower;
    if (sol.amplitude <= 0.0)
      throw NoFixedPoint("Heaviside branch has no positive amplitude");
    sol.residual = std::abs(amplitude_map(f, sol.amplitude) - sol.amplitude);
  } else {
    auto roots = amplitude_roots(f);
    if (roots.empty())
      throw NoFixedPoint("no sign change of G(a) - a in the scan range");
    sol.amplitude = branch == Branch::Largest ? roots.back() : roots.front();
    sol.residual = std::abs(amplitude_map(f, sol.amplitude) - sol.amplitude);
  }
  sol.i1 = bump_i1(f, sol.amplitude);
  sol.gamma = sol.i1 - 2.0;
  sol.sigma = bump_sigma(f, sol.amplitude);
  return sol;
}

double spectral_gap(const BumpSolution& sol) {
  if (!(sol.gamma > -1.0 && sol.gamma < 0.0))
    throw UnstableBranch("gamma outside (-1, 0): kappa beyond admissibility");
  return sol.gamma;
}

double diffusion_sigma(const BumpSolution& sol) { return sol.sigma; }

WeightMoments weight_moments(const BumpSolution& sol) {
  WeightMoments w;
  const FiringFunction& f = sol.f;
  if (f.kind == FiringKind::Heaviside)
    throw UnsupportedDerivative("weight moments need a smooth firing function");
  QuadGrid g = QuadGrid::make(quad_points_for(f));
  Eigen::ArrayXd fp = f.deriv(sol.amplitude * g.cosx);
  w.one = quad_integrate(g, fp);
  w.sin2 = quad_integrate(g, g.sinx.square() * fp);
  w.cos2 = quad_integrate(g, g.cosx.square() * fp);
  w.sincos = quad_integrate(g, g.sinx * g.cosx * fp);
  return w;
}

}  // namespace ringbumps
