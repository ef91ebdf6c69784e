#pragma once

#include <functional>
#include <optional>
#include <string>

#include "ringbumps/analysis.hpp"
#include "ringbumps/nfe.hpp"

namespace ringbumps {

enum class InitKind { Bump, BumpPlusMode2, QuarterBump, Zero, File };

InitKind init_kind_from_string(const std::string& s);
std::string to_string(InitKind k);

// initial profile at the grid positions; file profiles are one value per line
Eigen::ArrayXd initial_profile(const RingGrid& grid, InitKind kind,
                               double amplitude, const std::string& path = "");
// same profile sampled on a quadrature grid (for flow references)
Eigen::ArrayXd initial_profile(const QuadGrid& grid, InitKind kind,
                               double amplitude, const std::string& path = "");

struct SimSpec {
  int n = 500;
  FiringFunction f = FiringFunction::sigmoid(0.05, 0.5);
  InitKind init = InitKind::Bump;
  std::string init_file;
  double t_end = 500.0;
  double snapshot_dt = 0.5;
  std::uint64_t seed = 1;
  bool record_events = true;
  bool track_compensators = false;
};

// simulate and collect snapshots (including t = 0) and optionally events
SimRun run_simulation(const SimSpec& spec, const BumpSolution& bump);

// deterministic parallel map: item i writes only slot i
void parallel_for(int n_items, int parallelism,
                  const std::function<void(int)>& fn);

// requested <= 0 means "use all"; capped by RINGBUMPS_THREADS and hardware
int effective_parallelism(int requested);

struct ReplicaOutcome {
  std::uint64_t seed = 0;
  bool failed = false;
  std::string error;
  PhaseTrace trace;
  double sup_dist = 0.0;
  double qv = 0.0;          // realized, arc-length normalization
  double qv_window = 0.0;   // macroscopic duration covered by qv
};

struct PhaseDiffusionResult {
  std::vector<ReplicaOutcome> replicas;
  DiffusionEstimate estimate;       // weighted arc-length normalization
  double sigma_hat_angle = 0.0;     // estimate on the raw angle traces
  double sigma_theory = 0.0;        // from the bump solution
  double qv_mean = 0.0;             // mean of qv / qv_window over replicas
  double qv_se = 0.0;
  int n_failed = 0;
};

// n_replicas independent seeds (base_seed + index), each simulated, projected
// and aggregated. Deterministic for a given base seed at any parallelism.
// More than 20% replica failures raises SweepDegraded.
PhaseDiffusionResult phase_diffusion_sweep(const SimSpec& base,
                                           const BumpSolution& bump,
                                           int n_replicas, int parallelism,
                                           double burnin_c = 5.0);

struct ChaosPoint {
  int n = 0;
  double median_sup = 0.0;
};

struct ChaosResult {
  std::vector<ChaosPoint> points;
  double slope = 0.0;  // log-log slope of median sup distance vs N
};

// median over seeds of sup_{t <= t_end} ||U_N(t) - u_t||_2 for each N, where
// u_t is the deterministic flow from the same initial profile
ChaosResult chaos_scaling(const SimSpec& base, const BumpSolution& bump,
                          const std::vector<int>& ns, int n_seeds,
                          int parallelism);

// sup over snapshots of the L2(S) distance between the simulated profile and
// the deterministic flow started from the same initial condition
double sup_flow_distance(const SimRun& run, const BumpSolution& bump,
                         InitKind init, const std::string& init_file = "");

}  // namespace ringbumps
