#pragma once

#include <cstdint>
#include <vector>

#include "ringbumps/firing.hpp"
#include "ringbumps/grid.hpp"
#include "ringbumps/rng.hpp"

namespace ringbumps {

struct SpikeEvent {
  double time = 0.0;
  std::int32_t neuron = 0;  // 0-based index
};

struct HawkesParams {
  RingGrid grid;
  FiringFunction f;
  Eigen::ArrayXd rho;  // initial voltage at the grid positions
  std::uint64_t seed = 1;
  bool track_compensators = true;
  // events beyond this count are dropped from memory after being streamed to
  // spill_path (when set); the counters and state remain exact
  std::size_t event_capacity = SIZE_MAX;
  std::string spill_path;
};

// Exact event-driven state in rank-2 form: the voltage of neuron i is
//   U_i(t) = rho_i * decay0 + cos(x_i) p + sin(x_i) q,
// where p, q accumulate the 2pi/N kicks and decay exactly between events.
struct HawkesState {
  HawkesParams params;
  double t = 0.0;
  double p = 0.0, q = 0.0;
  double decay0 = 1.0;  // e^{-t}
  std::vector<std::int64_t> counts;
  std::vector<SpikeEvent> events;
  std::size_t events_total = 0;   // including spilled
  std::size_t events_spilled = 0;
  Eigen::ArrayXd compensators;    // int_0^t lambda_i, trapezoid between proposals
  Rng rng{1};
  // next thinning proposal, carried across simulate_until boundaries so the
  // event stream does not depend on the snapshot cadence
  double pending_proposal = -1.0;

  // cached cos/sin of positions and f(U_i) at the last accumulation time
  Eigen::ArrayXd cosx, sinx;
  Eigen::ArrayXd last_f;
};

HawkesState init_state(const HawkesParams& params);

// voltage kick to neuron i when neuron j spikes: (2pi/N) cos(x_i - x_j)
double jump_increment(const RingGrid& grid, int i, int j);

// Thinning against the constant dominating rate N (valid since f <= 1):
// proposals arrive as Exp(N) gaps, a uniformly chosen neuron fires with
// probability f(U_i(t-)). Acceptance uses the decayed pre-kick voltage.
void simulate_until(HawkesState& state, double t_end);

// U_i(t) for all i
Eigen::ArrayXd voltage_profile(const HawkesState& state);

// Z_i(t) - int_0^t lambda_i(s) ds for all i
Eigen::ArrayXd martingale_residual(const HawkesState& state);

// L2(S) norm of the piecewise-constant profile (bin widths 2pi/N)
double profile_l2_norm(const RingGrid& grid, const Eigen::ArrayXd& profile);

}  // namespace ringbumps
