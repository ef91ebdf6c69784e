#pragma once

#include <functional>

#include "ringbumps/field_ops.hpp"

namespace ringbumps {

// Flow of the field equation du/dt = -u + int cos(.-y) f(u(y)) dy.
// The cosine kernel makes the nonlocal term exactly two-dimensional, so the
// state reduces to the decaying initial profile plus two accumulators:
//   u_t = e^{-t} rho0 + a(t) cos + b(t) sin,
//   a' = -a + int cos f(u_t),  b' = -b + int sin f(u_t).
struct FlowState {
  double t = 0.0;
  Eigen::ArrayXd rho0;
  double a = 0.0, b = 0.0;
};

Eigen::ArrayXd flow_field(const QuadGrid& g, const FlowState& st);

// Classical RK4 on (a, b); the e^{-t} rho0 term is exact. The observer, when
// set, fires at multiples of observe_dt and at t_end.
FlowState flow(const QuadGrid& g, const FiringFunction& f,
               const Eigen::ArrayXd& rho0, double t_end, double dt = 1e-3,
               const std::function<void(const FlowState&)>& observe = nullptr,
               double observe_dt = 0.0);

// Phase solving <g - u_phi, v_phi>_w = 0 by Newton from the Fourier-angle
// seed with the constant slope -A^2, falling back to a 720-point scan with
// bisection. Throws TooFarFromManifold when no root reaches |F| < 1e-10 or
// the L2 distance to the manifold exceeds radius (default A sqrt(pi)/2).
double variational_phase(const QuadGrid& g, const Eigen::ArrayXd& field,
                         const BumpSolution& bump, double radius = -1.0);

struct IsochronOptions {
  double tol = 1e-8;      // terminal distance to the manifold
  double t_max = 200.0;   // horizon guard
  double dt = 5e-3;
  double check_dt = 0.5;  // distance checkpoints
};

struct IsochronResult {
  double theta = 0.0;
  bool converged = false;
  int iterations = 0;   // RK4 steps taken
  double final_dist = 0.0;
};

// Integrate the flow until the manifold distance falls below tol, then read
// off the variational phase of the terminal field. Distance not decreasing
// over 5 consecutive checkpoints raises OutsideBasin.
IsochronResult isochronal_phase(const QuadGrid& g, const Eigen::ArrayXd& field,
                                const BumpSolution& bump,
                                const IsochronOptions& opt = {});

// Directional derivative of the isochronal phase at the bump:
//   D theta(u_phi)[h] = <v_phi, h>_w / ||v_phi||_w^2.
// The finite-difference oracle through isochronal_phase pins this
// normalization (moving along v_phi advances the phase at unit rate).
double dtheta(const PhaseFrame& fr, const Eigen::ArrayXd& h);

// beta(h, l) = int f''(u_phi) v_phi h l dy
double beta(const PhaseFrame& fr, const Eigen::ArrayXd& h,
            const Eigen::ArrayXd& l);

// Second derivative of the isochronal phase at the bump, assembled from the
// eigenspace decomposition of e^{tL}; symmetric in (h, l).
double d2theta(const PhaseFrame& fr, const Eigen::ArrayXd& h,
               const Eigen::ArrayXd& l);

}  // namespace ringbumps
