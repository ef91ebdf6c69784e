#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ringbumps/analysis.hpp"
#include "ringbumps/rng.hpp"
#include "ringbumps/runner.hpp"

using namespace ringbumps;

namespace {

BumpSolution bump05() {
  static BumpSolution sol =
      solve_amplitude(FiringFunction::sigmoid(0.05, 0.5), Branch::Largest);
  return sol;
}

Eigen::ArrayXd random_field(const QuadGrid& g, Rng& rng, int max_mode = 6) {
  Eigen::ArrayXd f = Eigen::ArrayXd::Zero(g.m);
  for (int k = 0; k <= max_mode; ++k) {
    double ac = 2.0 * rng.uniform() - 1.0;
    double as = 2.0 * rng.uniform() - 1.0;
    f += ac * (k * g.x).cos() + as * (k * g.x).sin();
  }
  return f;
}

// 720-point brute-force phase scan, the independent oracle for the closed form
double scan_distance(const QuadGrid& g, const Eigen::ArrayXd& u, double amp) {
  double best = HUGE_VAL;
  for (int k = 0; k < 720; ++k) {
    double phi = -kPi + kTwoPi * k / 720.0;
    Eigen::ArrayXd diff = u - amp * (g.x + phi).cos();
    best = std::min(best, std::sqrt(quad_integrate(g, diff * diff)));
  }
  return best;
}

std::vector<PhaseTrace> synthetic_brownian(double sigma, double drift,
                                           int n_replicas, int n_samples,
                                           double dtau, std::uint64_t seed) {
  std::vector<PhaseTrace> traces(n_replicas);
  Rng rng(seed);
  double step_sd = sigma * std::sqrt(dtau);
  for (auto& tr : traces) {
    tr.n = 500;
    double th = 0.0;
    for (int k = 0; k < n_samples; ++k) {
      tr.tau.push_back(k * dtau);
      tr.theta.push_back(th);
      tr.valid.push_back(1);
      th += drift * dtau + step_sd * rng.normal();
    }
  }
  return traces;
}

}  // namespace

TEST_CASE("manifold distance closed form") {
  QuadGrid g = QuadGrid::make(512);
  BumpSolution sol = bump05();
  double A = sol.amplitude;

  SUBCASE("on the manifold") {
    Eigen::ArrayXd u = A * (g.x + 0.7).cos();
    CHECK(manifold_distance(g, u, A) < 1e-12);
  }
  SUBCASE("orthogonal mode-2 perturbation") {
    double eps = 0.01;
    Eigen::ArrayXd u = A * (g.x + 0.7).cos() + eps * (2.0 * g.x).cos();
    CHECK(manifold_distance(g, u, A) ==
          doctest::Approx(eps * std::sqrt(kPi)).epsilon(1e-10));
  }
  SUBCASE("zero field sits A sqrt(pi) away") {
    Eigen::ArrayXd u = Eigen::ArrayXd::Zero(g.m);
    CHECK(manifold_distance(g, u, A) ==
          doctest::Approx(A * std::sqrt(kPi)).epsilon(1e-12));
    CHECK(scan_distance(g, u, A) ==
          doctest::Approx(A * std::sqrt(kPi)).epsilon(1e-6));
  }
  SUBCASE("matches the 720-point scan on random fields") {
    Rng rng(11);
    for (int rep = 0; rep < 10; ++rep) {
      Eigen::ArrayXd u = random_field(g, rng);
      double closed = manifold_distance(g, u, A);
      double scanned = scan_distance(g, u, A);
      // the scan is itself a discrete upper bound with O(dphi^2) slack
      CHECK(closed <= scanned + 1e-9);
      CHECK(scanned - closed < 1e-4 * (1.0 + closed));
    }
  }
  SUBCASE("rotation invariance") {
    Rng rng(12);
    Eigen::ArrayXd u = random_field(g, rng);
    double d0 = manifold_distance(g, u, A);
    // rotate by a whole number of grid cells so samples permute exactly
    int shift = 37;
    Eigen::ArrayXd r(g.m);
    for (int k = 0; k < g.m; ++k) r[k] = u[(k + shift) % g.m];
    CHECK(manifold_distance(g, r, A) == doctest::Approx(d0).epsilon(1e-12));
  }
}

TEST_CASE("profile distance and phase on step profiles") {
  BumpSolution sol = bump05();
  double A = sol.amplitude;
  RingGrid grid = RingGrid::make(500);

  SUBCASE("sampled bump is close, distance O(1/N)") {
    Eigen::ArrayXd prof = A * grid.x.cos();
    double d = manifold_distance_profile(grid, prof, A);
    CHECK(d < 3.0 * A * kTwoPi / grid.n);  // Riemann bound scale
    CHECK(d > 0.0);
  }
  SUBCASE("variational phase of a shifted sampled bump") {
    // the profile holds the value of neuron i on the bin left of x_i, so the
    // step function lags the smooth bump by half a bin width
    Eigen::ArrayXd prof = A * (grid.x + 0.7).cos();
    double phi = profile_variational_phase(grid, prof, sol);
    CHECK(phi == doctest::Approx(0.7 + kPi / grid.n).epsilon(1e-6));
    CHECK(std::abs(phi - 0.7) < 1.1 * kPi / grid.n);
  }
  SUBCASE("projection rejects far profiles") {
    Eigen::ArrayXd prof = Eigen::ArrayXd::Zero(grid.n);
    CHECK_THROWS_AS(profile_variational_phase(grid, prof, sol),
                    TooFarFromManifold);
  }
}

TEST_CASE("unwrap is the inverse of wrapping for sub-pi steps") {
  Rng rng(21);
  for (int rep = 0; rep < 50; ++rep) {
    int n = 200;
    std::vector<double> lift(n), wrapped(n);
    double th = kTwoPi * rng.uniform() - kPi;
    for (int k = 0; k < n; ++k) {
      lift[k] = th;
      wrapped[k] = wrap_angle(th);
      th += 3.0 * (rng.uniform() - 0.5);  // steps in (-1.5, 1.5), below pi
    }
    auto unwrapped = unwrap_phases(wrapped);
    for (int k = 1; k < n; ++k) {
      CHECK(unwrapped[k] - unwrapped[k - 1] ==
            doctest::Approx(lift[k] - lift[k - 1]).epsilon(1e-12));
      // rewrap recovers the raw circle phase
      CHECK(wrap_angle(unwrapped[k] - wrapped[k]) ==
            doctest::Approx(0.0).scale(1.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("phase trace") {
  BumpSolution sol = bump05();
  double A = sol.amplitude;
  RingGrid grid = RingGrid::make(500);

  SUBCASE("constant manifold snapshots give a constant trace") {
    SimRun run;
    run.grid = grid;
    run.t_end = 200.0;
    for (int k = 0; k <= 40; ++k) {
      run.snap_t.push_back(5.0 * k);
      run.snap_u.push_back(A * (grid.x + 0.3).cos());
    }
    PhaseTrace tr = phase_trace(run, sol);
    REQUIRE(tr.tau.size() > 0);
    for (std::size_t k = 0; k < tr.tau.size(); ++k) {
      CHECK(tr.valid[k] == 1);
      CHECK(std::abs(tr.theta[k] - 0.3) < 1.1 * kPi / grid.n);
      CHECK(tr.theta[k] == doctest::Approx(tr.theta[0]).epsilon(1e-12));
    }
    // burn-in discards t < 5 log N
    CHECK(tr.tau.front() * grid.n >= 5.0 * std::log(500.0) - 1e-9);
  }

  SUBCASE("isochronal mode agrees with variational mode near the manifold") {
    SimRun run;
    run.grid = grid;
    run.t_end = 100.0;
    for (int k = 0; k <= 20; ++k) {
      run.snap_t.push_back(5.0 * k);
      run.snap_u.push_back(A * (grid.x - 0.9).cos());
    }
    PhaseTrace tv = phase_trace(run, sol, PhaseMode::Variational);
    PhaseTrace ti = phase_trace(run, sol, PhaseMode::Isochronal);
    REQUIRE(tv.tau.size() == ti.tau.size());
    // nearest-bin resampling of the 500-bin profile onto the 512-node grid
    // shifts the isochronal reading by a fixed geometric offset; increments
    // are unaffected, so require a small and constant gap
    double gap0 = wrap_angle(ti.theta[0] - tv.theta[0]);
    for (std::size_t k = 0; k < tv.tau.size(); ++k) {
      double gap = wrap_angle(ti.theta[k] - tv.theta[k]);
      CHECK(std::abs(gap) < 6e-3);
      CHECK(gap == doctest::Approx(gap0).epsilon(1e-10));
    }
  }

  SUBCASE("prescribed walk crossing the branch cut unwraps to its lift") {
    SimRun run;
    run.grid = grid;
    run.t_end = 400.0;
    std::vector<double> lift;
    double phase = 3.0;  // near +pi, the walk will cross it
    for (int k = 0; k <= 80; ++k) {
      run.snap_t.push_back(5.0 * k);
      run.snap_u.push_back(A * (grid.x + wrap_angle(phase)).cos());
      lift.push_back(phase);
      phase += 0.31;  // winds several times around the circle
    }
    PhaseTrace tr = phase_trace(run, sol);
    // locate first kept sample in the prescribed lift
    std::size_t offset = run.snap_t.size() - tr.tau.size();
    for (std::size_t k = 0; k < tr.tau.size(); ++k) {
      double expected = lift[offset + k] - lift[offset] + tr.theta[0];
      CHECK(tr.theta[k] == doctest::Approx(expected).epsilon(1e-4));
    }
  }
}

TEST_CASE("estimate_sigma") {
  SUBCASE("recovers a synthetic Brownian coefficient") {
    auto traces = synthetic_brownian(2.0, 0.0, 100, 1001, 1e-3, 31);
    DiffusionEstimate est = estimate_sigma(traces);
    CHECK(est.sigma_hat > 1.8);
    CHECK(est.sigma_hat < 2.2);
    CHECK(est.r2_linearity > 0.9);
    CHECK(est.drift_z < 3.0);
    CHECK(est.n_replicas == 100);
  }
  SUBCASE("constant traces give zero") {
    auto traces = synthetic_brownian(0.0, 0.0, 10, 300, 1e-3, 32);
    DiffusionEstimate est = estimate_sigma(traces);
    CHECK(est.sigma_hat == 0.0);
  }
  SUBCASE("pure drift is rejected by the mean-zero test") {
    auto traces = synthetic_brownian(0.0, 1.0, 10, 300, 1e-3, 33);
    DiffusionEstimate est = estimate_sigma(traces);
    CHECK(est.drift_z > 3.0);
  }
  SUBCASE("scale consistency") {
    auto traces = synthetic_brownian(1.3, 0.0, 20, 400, 1e-3, 34);
    DiffusionEstimate base = estimate_sigma(traces);
    double c = 1.7;
    auto scaled = traces;
    for (auto& tr : scaled)
      for (auto& th : tr.theta) th *= c;
    DiffusionEstimate est = estimate_sigma(scaled);
    CHECK(est.sigma_hat == doctest::Approx(c * base.sigma_hat).epsilon(1e-12));
  }
  SUBCASE("fewer than two traces is an error") {
    auto traces = synthetic_brownian(1.0, 0.0, 1, 300, 1e-3, 35);
    CHECK_THROWS_AS(estimate_sigma(traces), InsufficientData);
  }
  SUBCASE("stderr shrinks roughly like 1/sqrt(replicas)") {
    auto t25 = synthetic_brownian(2.0, 0.0, 25, 1001, 1e-3, 36);
    auto t100 = synthetic_brownian(2.0, 0.0, 100, 1001, 1e-3, 36);
    DiffusionEstimate e25 = estimate_sigma(t25);
    DiffusionEstimate e100 = estimate_sigma(t100);
    CHECK(e100.stderr_ < e25.stderr_);
  }
}

TEST_CASE("replica sweep determinism across parallelism") {
  BumpSolution sol = bump05();
  SimSpec spec;
  spec.n = 100;
  spec.f = sol.f;
  spec.t_end = 150.0;
  spec.snapshot_dt = 0.5;
  spec.seed = 500;

  PhaseDiffusionResult r1 = phase_diffusion_sweep(spec, sol, 6, 1);
  PhaseDiffusionResult r2 = phase_diffusion_sweep(spec, sol, 6, 2);
  REQUIRE(r1.replicas.size() == r2.replicas.size());
  for (std::size_t i = 0; i < r1.replicas.size(); ++i) {
    REQUIRE(r1.replicas[i].trace.theta.size() ==
            r2.replicas[i].trace.theta.size());
    for (std::size_t k = 0; k < r1.replicas[i].trace.theta.size(); ++k)
      CHECK(r1.replicas[i].trace.theta[k] == r2.replicas[i].trace.theta[k]);
  }
  CHECK(r1.estimate.sigma_hat == r2.estimate.sigma_hat);
  CHECK(r1.qv_mean == r2.qv_mean);
}
