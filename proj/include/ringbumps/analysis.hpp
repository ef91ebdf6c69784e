#pragma once

#include <cstdint>
#include <vector>

#include "ringbumps/field.hpp"
#include "ringbumps/hawkes.hpp"
#include "ringbumps/stationary.hpp"

namespace ringbumps {

// Snapshot record of one completed simulation.
struct SimRun {
  RingGrid grid;
  double t_end = 0.0;
  std::uint64_t seed = 0;
  std::vector<double> snap_t;
  std::vector<Eigen::ArrayXd> snap_u;  // piecewise-constant profiles
  std::vector<SpikeEvent> events;      // empty when not recorded
};

// min over phases of ||u - A cos(.+phi)||_2, closed form from the first
// Fourier mode (smooth field on the quadrature grid).
double manifold_distance(const QuadGrid& g, const Eigen::ArrayXd& u,
                         double amplitude);

// Same for a piecewise-constant profile; bin integrals are exact.
double manifold_distance_profile(const RingGrid& grid,
                                 const Eigen::ArrayXd& profile,
                                 double amplitude);

// Variational phase of a piecewise-constant profile. The weighted form factor
//   F(phi) = sum_i U_i [ f(A cos(x_i+phi)) - f(A cos(x_{i-1}+phi)) ]
// is exact because v_phi f'(u_phi) is the derivative of f(A cos(.+phi)).
double profile_variational_phase(const RingGrid& grid,
                                 const Eigen::ArrayXd& profile,
                                 const BumpSolution& bump,
                                 double radius = -1.0);

enum class PhaseMode { Variational, Isochronal };

// Time-stamped, circle-unwrapped empirical phase on the macroscopic clock
// tau = t / N. Samples before the burn-in time C log N are discarded.
struct PhaseTrace {
  std::vector<double> tau;
  std::vector<double> theta;  // unwrapped, radians
  std::vector<std::uint8_t> valid;
  double burnin_t = 0.0;
  int n = 0;

  int valid_count() const;
};

PhaseTrace phase_trace(const SimRun& run, const BumpSolution& bump,
                       PhaseMode mode = PhaseMode::Variational,
                       double burnin_c = 5.0);

// unwrap to the real line assuming consecutive steps below pi in size
std::vector<double> unwrap_phases(const std::vector<double>& wrapped);

struct DiffusionEstimate {
  double sigma_hat = 0.0;   // sqrt of the variance-vs-width slope
  double stderr_ = 0.0;     // replica bootstrap, 200 resamples
  double r2_linearity = 0.0;
  double drift_z = 0.0;     // |mean| / se of pooled increments
  int n_replicas = 0;
};

// Increment-variance regression over four disjoint-window widths, pooled
// across replicas. Traces must share their sampling grid.
DiffusionEstimate estimate_sigma(const std::vector<PhaseTrace>& traces);

struct ProximityReport {
  double sup_dist = 0.0;
  double window_begin = 0.0;
  double window_end = 0.0;
};

ProximityReport proximity_report(const SimRun& run, const BumpSolution& bump,
                                 double burnin_c = 5.0);

// Realized quadratic variation of the phase in the arc-length normalization
// (see README): sum over post-burn-in events of (2pi/N)^2 sin^2(x_j + theta).
double realized_phase_qv(const SimRun& run, const PhaseTrace& trace);

inline double log_log_slope(const std::vector<double>& x,
                            const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = static_cast<int>(x.size());
  for (int i = 0; i < n; ++i) {
    double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace ringbumps
