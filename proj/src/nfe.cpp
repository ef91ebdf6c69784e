#include "ringbumps/nfe.hpp"

#include <cmath>

namespace ringbumps {

Eigen::ArrayXd flow_field(const QuadGrid& g, const FlowState& st) {
  return std::exp(-st.t) * st.rho0 + st.a * g.cosx + st.b * g.sinx;
}

namespace {

struct FlowRhs {
  const QuadGrid& g;
  const FiringFunction& f;
  const Eigen::ArrayXd& rho0;

  void eval(double t, double a, double b, double& da, double& db) const {
    Eigen::ArrayXd u = std::exp(-t) * rho0 + a * g.cosx + b * g.sinx;
    Eigen::ArrayXd fu = f(u);
    da = -a + quad_integrate(g, g.cosx * fu);
    db = -b + quad_integrate(g, g.sinx * fu);
  }
};

// one RK4 step of size h on (a, b)
void rk4_step(const FlowRhs& rhs, double t, double h, double& a, double& b) {
  double k1a, k1b, k2a, k2b, k3a, k3b, k4a, k4b;
  rhs.eval(t, a, b, k1a, k1b);
  rhs.eval(t + 0.5 * h, a + 0.5 * h * k1a, b + 0.5 * h * k1b, k2a, k2b);
  rhs.eval(t + 0.5 * h, a + 0.5 * h * k2a, b + 0.5 * h * k2b, k3a, k3b);
  rhs.eval(t + h, a + h * k3a, b + h * k3b, k4a, k4b);
  a += h / 6.0 * (k1a + 2.0 * k2a + 2.0 * k3a + k4a);
  b += h / 6.0 * (k1b + 2.0 * k2b + 2.0 * k3b + k4b);
}

struct FieldMoments {
  double c = 0.0, s = 0.0, n2 = 0.0, n2perp = 0.0;
};

FieldMoments moments_of(const QuadGrid& g, const Eigen::ArrayXd& u) {
  FieldMoments m;
  m.c = quad_integrate(g, u * g.cosx) / kPi;
  m.s = quad_integrate(g, u * g.sinx) / kPi;
  m.n2 = quad_integrate(g, u * u);
  Eigen::ArrayXd perp = u - m.c * g.cosx - m.s * g.sinx;
  m.n2perp = quad_integrate(g, perp * perp);
  return m;
}

// manifold distance of e^{-t} rho0 + a cos + b sin. The flow feeds only the
// first Fourier mode, so the perpendicular part is exactly e^{-t} times the
// initial one; this keeps the distance meaningful down to rounding level.
double flow_distance(const FieldMoments& m0, double t, double a, double b,
                     double amplitude) {
  double e = std::exp(-t);
  double c = e * m0.c + a;
  double s = e * m0.s + b;
  double r = std::sqrt(c * c + s * s);
  return std::sqrt(e * e * m0.n2perp + kPi * (r - amplitude) * (r - amplitude));
}

}  // namespace

FlowState flow(const QuadGrid& g, const FiringFunction& f,
               const Eigen::ArrayXd& rho0, double t_end, double dt,
               const std::function<void(const FlowState&)>& observe,
               double observe_dt) {
  if (!(dt > 0.0 && dt <= 0.01)) throw ConfigError("flow requires 0 < dt <= 0.01");
  if (!(t_end > 0.0)) throw ConfigError("flow requires t_end > 0");

  FlowState st;
  st.rho0 = rho0;
  FlowRhs rhs{g, f, st.rho0};

  if (observe) observe(st);
  double next_obs = (observe && observe_dt > 0.0) ? observe_dt : t_end;
  long guard = 0;
  while (st.t < t_end - 1e-12) {
    double target = std::min(t_end, next_obs);
    double h = std::min(dt, target - st.t);
    rk4_step(rhs, st.t, h, st.a, st.b);
    st.t += h;
    if (++guard % 1024 == 0 && !(std::isfinite(st.a) && std::isfinite(st.b)))
      throw NumericalBlowup("flow state is not finite");
    if (st.t >= target - 1e-12) {
      st.t = target;
      if (observe) observe(st);
      next_obs = (observe && observe_dt > 0.0) ? target + observe_dt : t_end;
    }
  }
  if (!(std::isfinite(st.a) && std::isfinite(st.b)))
    throw NumericalBlowup("flow state is not finite");
  return st;
}

double variational_phase(const QuadGrid& g, const Eigen::ArrayXd& field,
                         const BumpSolution& bump, double radius) {
  const double A = bump.amplitude;
  if (radius < 0.0) radius = 0.5 * A * std::sqrt(kPi);

  FieldMoments m = moments_of(g, field);
  double dist = manifold_distance_from_moments(m.n2, m.c, m.s, A);
  if (dist > radius)
    throw TooFarFromManifold("distance " + std::to_string(dist) +
                             " exceeds projection radius");

  // F(phi) = <g, v_phi>_w  (the u_phi part vanishes by parity)
  auto F = [&](double phi) {
    Eigen::ArrayXd vw = bump.f.deriv(A * (g.x + phi).cos()) *
                        (-A) * (g.x + phi).sin();
    return quad_integrate(g, field * vw);
  };

  const double tol = 1e-10;
  double phi = std::atan2(-kPi * m.s, kPi * m.c);
  double fval = F(phi);
  for (int it = 0; it < 60 && std::abs(fval) > tol; ++it) {
    phi = wrap_angle(phi + fval / (A * A));
    fval = F(phi);
  }

  if (std::abs(fval) > tol) {
    // scan fallback: bracket every sign change, bisect, keep the root with
    // the smallest distance to the corresponding bump
    const int n = 720;
    double best_phi = 0.0, best_d = HUGE_VAL;
    double p0 = -kPi, f0 = F(p0);
    for (int k = 1; k <= n; ++k) {
      double p1 = -kPi + kTwoPi * k / n;
      double f1 = F(p1);
      if (f0 == 0.0 || f0 * f1 < 0.0) {
        double x0 = p0, x1 = p1, fa = f0;
        for (int it = 0; it < 100 && x1 - x0 > 1e-15; ++it) {
          double xm = 0.5 * (x0 + x1), fm = F(xm);
          if (fa * fm <= 0.0) x1 = xm;
          else { x0 = xm; fa = fm; }
        }
        double cand = wrap_angle(0.5 * (x0 + x1));
        double d = std::sqrt(std::max(
            0.0, m.n2 - 2.0 * A * kPi * (m.c * std::cos(cand) - m.s * std::sin(cand)) +
                     A * A * kPi));
        if (d < best_d) { best_d = d; best_phi = cand; }
      }
      p0 = p1;
      f0 = f1;
    }
    if (best_d == HUGE_VAL || std::abs(F(best_phi)) > tol)
      throw TooFarFromManifold("no variational root with |F| < 1e-10");
    phi = best_phi;
  }
  return wrap_angle(phi);
}

IsochronResult isochronal_phase(const QuadGrid& g, const Eigen::ArrayXd& field,
                                const BumpSolution& bump,
                                const IsochronOptions& opt) {
  const double A = bump.amplitude;
  FieldMoments m0 = moments_of(g, field);

  IsochronResult res;
  FlowState st;
  st.rho0 = field;
  FlowRhs rhs{g, bump.f, st.rho0};

  double dist = flow_distance(m0, 0.0, 0.0, 0.0, A);
  double last_dist = dist;
  int non_decreasing = 0;
  double next_check = opt.check_dt;

  while (dist >= opt.tol && st.t < opt.t_max) {
    double h = std::min(opt.dt, next_check - st.t);
    rk4_step(rhs, st.t, h, st.a, st.b);
    st.t += h;
    ++res.iterations;
    if (st.t >= next_check - 1e-12) {
      dist = flow_distance(m0, st.t, st.a, st.b, A);
      if (dist >= last_dist) {
        if (++non_decreasing >= 5)
          throw OutsideBasin("manifold distance not decreasing along the flow");
      } else {
        non_decreasing = 0;
      }
      last_dist = dist;
      next_check += opt.check_dt;
    }
  }

  res.final_dist = flow_distance(m0, st.t, st.a, st.b, A);
  res.converged = res.final_dist < opt.tol;
  res.theta = variational_phase(g, flow_field(g, st), bump);
  return res;
}

double dtheta(const PhaseFrame& fr, const Eigen::ArrayXd& h) {
  return weighted_inner(fr, fr.v, h) / fr.nv2;
}

double beta(const PhaseFrame& fr, const Eigen::ArrayXd& h,
            const Eigen::ArrayXd& l) {
  Eigen::ArrayXd f2 = fr.bump.f.deriv2(fr.u);
  return quad_integrate(fr.grid, f2 * fr.v * h * l);
}

double d2theta(const PhaseFrame& fr, const Eigen::ArrayXd& h,
               const Eigen::ArrayXd& l) {
  const double gam = fr.bump.gamma;
  const double A2 = fr.bump.amplitude * fr.bump.amplitude;

  // coefficients of h, l on the eigendirections (idempotent projections)
  double c0h = weighted_inner(fr, h, fr.v) / fr.nv2;
  double c0l = weighted_inner(fr, l, fr.v) / fr.nv2;
  double cgh = weighted_inner(fr, h, fr.u) / fr.nu2;
  double cgl = weighted_inner(fr, l, fr.u) / fr.nu2;

  double bvh = beta(fr, fr.v, h);
  double bvl = beta(fr, fr.v, l);
  double buh = beta(fr, fr.u, h);
  double bul = beta(fr, fr.u, l);
  double bhl = beta(fr, h, l);

  double val = 0.5 * (c0h * bvl + c0l * bvh) +
               (1.0 + gam) / (2.0 * (1.0 - gam)) * (cgh * bul + cgl * buh) -
               A2 * (2.0 - gam) * (1.0 + gam) / (2.0 * (1.0 - gam)) *
                   (c0h * cgl + c0l * cgh) +
               0.5 * bhl;
  return val / fr.nv2;
}

}  // namespace ringbumps
