#include "ringbumps/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <thread>

namespace ringbumps {

InitKind init_kind_from_string(const std::string& s) {
  if (s == "bump") return InitKind::Bump;
  if (s == "bump-plus-mode2") return InitKind::BumpPlusMode2;
  if (s == "quarter-bump") return InitKind::QuarterBump;
  if (s == "zero") return InitKind::Zero;
  if (s == "file") return InitKind::File;
  throw ConfigError("unknown init kind: " + s);
}

std::string to_string(InitKind k) {
  switch (k) {
    case InitKind::Bump: return "bump";
    case InitKind::BumpPlusMode2: return "bump-plus-mode2";
    case InitKind::QuarterBump: return "quarter-bump";
    case InitKind::Zero: return "zero";
    case InitKind::File: return "file";
  }
  return "?";
}

namespace {

Eigen::ArrayXd profile_at(const Eigen::ArrayXd& x, InitKind kind,
                          double amplitude, const std::string& path) {
  switch (kind) {
    case InitKind::Bump:
      return amplitude * x.cos();
    case InitKind::BumpPlusMode2:
      return amplitude * x.cos() + (2.0 * x).cos();
    case InitKind::QuarterBump:
      return 0.25 * amplitude * x.cos();
    case InitKind::Zero:
      return Eigen::ArrayXd::Zero(x.size());
    case InitKind::File: {
      std::ifstream in(path);
      if (!in) throw ConfigError("cannot read init file " + path);
      std::vector<double> vals;
      double v;
      while (in >> v) vals.push_back(v);
      if (static_cast<long>(vals.size()) != x.size())
        throw ConfigError("init file length does not match grid size");
      Eigen::ArrayXd out(x.size());
      for (long i = 0; i < x.size(); ++i) out[i] = vals[i];
      return out;
    }
  }
  throw ConfigError("bad init kind");
}

}  // namespace

Eigen::ArrayXd initial_profile(const RingGrid& grid, InitKind kind,
                               double amplitude, const std::string& path) {
  return profile_at(grid.x, kind, amplitude, path);
}

Eigen::ArrayXd initial_profile(const QuadGrid& grid, InitKind kind,
                               double amplitude, const std::string& path) {
  if (kind == InitKind::File)
    throw ConfigError("file profiles live on the neuron grid");
  return profile_at(grid.x, kind, amplitude, path);
}

SimRun run_simulation(const SimSpec& spec, const BumpSolution& bump) {
  HawkesParams p;
  p.grid = RingGrid::make(spec.n);
  p.f = spec.f;
  p.rho = initial_profile(p.grid, spec.init, bump.amplitude, spec.init_file);
  p.seed = spec.seed;
  p.track_compensators = spec.track_compensators;

  HawkesState st = init_state(p);
  SimRun run;
  run.grid = p.grid;
  run.t_end = spec.t_end;
  run.seed = spec.seed;

  run.snap_t.push_back(0.0);
  run.snap_u.push_back(voltage_profile(st));
  long n_snaps = std::lround(spec.t_end / spec.snapshot_dt);
  for (long k = 1; k <= n_snaps; ++k) {
    double target = std::min(spec.t_end, k * spec.snapshot_dt);
    simulate_until(st, target);
    run.snap_t.push_back(st.t);
    run.snap_u.push_back(voltage_profile(st));
  }
  if (st.t < spec.t_end) {
    simulate_until(st, spec.t_end);
    run.snap_t.push_back(st.t);
    run.snap_u.push_back(voltage_profile(st));
  }
  if (spec.record_events) run.events = std::move(st.events);
  return run;
}

int effective_parallelism(int requested) {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw < 1) hw = 1;
  int cap = hw;
  if (const char* env = std::getenv("RINGBUMPS_THREADS")) {
    int v = std::atoi(env);
    if (v >= 1) cap = std::min(cap, v);
  }
  if (requested <= 0) return cap;
  return std::min(requested, cap);
}

void parallel_for(int n_items, int parallelism,
                  const std::function<void(int)>& fn) {
  int workers = std::max(1, std::min(parallelism, n_items));
  if (workers == 1) {
    for (int i = 0; i < n_items; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < n_items; i = next.fetch_add(1))
        fn(i);
    });
  for (auto& th : pool) th.join();
}

PhaseDiffusionResult phase_diffusion_sweep(const SimSpec& base,
                                           const BumpSolution& bump,
                                           int n_replicas, int parallelism,
                                           double burnin_c) {
  PhaseDiffusionResult result;
  result.replicas.resize(n_replicas);
  result.sigma_theory = bump.sigma;

  parallel_for(n_replicas, effective_parallelism(parallelism), [&](int r) {
    ReplicaOutcome& out = result.replicas[r];
    out.seed = base.seed + static_cast<std::uint64_t>(r);
    try {
      SimSpec spec = base;
      spec.seed = out.seed;
      SimRun run = run_simulation(spec, bump);
      out.trace = phase_trace(run, bump, PhaseMode::Variational, burnin_c);
      out.sup_dist =
          proximity_report(run, bump, burnin_c).sup_dist;
      out.qv = realized_phase_qv(run, out.trace);
      if (!out.trace.tau.empty())
        out.qv_window = out.trace.tau.back() - out.trace.tau.front();
    } catch (const std::exception& e) {
      out.failed = true;
      out.error = e.what();
    }
  });

  std::vector<PhaseTrace> traces;
  std::vector<double> qv_rates;
  for (const auto& r : result.replicas) {
    if (r.failed) {
      ++result.n_failed;
      continue;
    }
    traces.push_back(r.trace);
    if (r.qv_window > 0.0) qv_rates.push_back(r.qv / r.qv_window);
  }
  if (result.n_failed > 0.2 * n_replicas)
    throw SweepDegraded(std::to_string(result.n_failed) + " of " +
                        std::to_string(n_replicas) + " replicas failed");

  if (traces.size() >= 2) {
    DiffusionEstimate angle = estimate_sigma(traces);
    result.sigma_hat_angle = angle.sigma_hat;
    // report in the same normalization as sigma_theory: the phase angle moves
    // along the manifold at speed ||v_phi||_w = A per radian, so the
    // arc-length estimate is A times the angle estimate
    result.estimate = angle;
    result.estimate.sigma_hat = bump.amplitude * angle.sigma_hat;
    result.estimate.stderr_ = bump.amplitude * angle.stderr_;
  } else {
    // a single replica still yields its trace and report; no estimate
    result.estimate.n_replicas = static_cast<int>(traces.size());
  }

  if (!qv_rates.empty()) {
    double mean = 0.0;
    for (double v : qv_rates) mean += v;
    mean /= qv_rates.size();
    double var = 0.0;
    for (double v : qv_rates) var += (v - mean) * (v - mean);
    var = qv_rates.size() > 1 ? var / (qv_rates.size() - 1) : 0.0;
    result.qv_mean = mean;
    result.qv_se = std::sqrt(var / qv_rates.size());
  }
  return result;
}

namespace {

// (a, b) trajectory of the reference flow sampled at the run snapshot times
struct FlowRef {
  std::vector<double> t;
  std::vector<double> a, b;
};

FlowRef reference_flow(const QuadGrid& qg, const FiringFunction& f,
                       const Eigen::ArrayXd& rho0, double t_end,
                       double snapshot_dt) {
  FlowRef ref;
  flow(qg, f, rho0, t_end, 1e-3,
       [&](const FlowState& st) {
         ref.t.push_back(st.t);
         ref.a.push_back(st.a);
         ref.b.push_back(st.b);
       },
       snapshot_dt);
  return ref;
}

}  // namespace

double sup_flow_distance(const SimRun& run, const BumpSolution& bump,
                         InitKind init, const std::string& init_file) {
  const int m = 8192;
  QuadGrid fine = QuadGrid::make(m);
  QuadGrid qflow = QuadGrid::make(2048);

  Eigen::ArrayXd rho_fine, rho_flow;
  if (init == InitKind::File) {
    // step initial data: evaluate the bin value at each fine node
    Eigen::ArrayXd vals =
        initial_profile(run.grid, init, bump.amplitude, init_file);
    rho_fine.resize(m);
    for (int k = 0; k < m; ++k) {
      int bin = std::min(run.grid.n - 1,
                         static_cast<int>((fine.x[k] + kPi) / run.grid.spacing()));
      rho_fine[k] = vals[bin];
    }
    rho_flow.resize(qflow.m);
    for (int k = 0; k < qflow.m; ++k) {
      int bin = std::min(run.grid.n - 1,
                         static_cast<int>((qflow.x[k] + kPi) / run.grid.spacing()));
      rho_flow[k] = vals[bin];
    }
  } else {
    rho_fine = initial_profile(fine, init, bump.amplitude);
    rho_flow = initial_profile(qflow, init, bump.amplitude);
  }

  double dt_snap = run.snap_t.size() > 1 ? run.snap_t[1] - run.snap_t[0] : run.t_end;
  FlowRef ref = reference_flow(qflow, bump.f, rho_flow, run.t_end, dt_snap);

  // node -> bin map for resampling the step profile
  std::vector<int> bin_of(m);
  for (int k = 0; k < m; ++k)
    bin_of[k] = std::min(run.grid.n - 1,
                         static_cast<int>((fine.x[k] + kPi) / run.grid.spacing()));

  double sup = 0.0;
  std::size_t j = 0;
  for (std::size_t k = 0; k < run.snap_t.size(); ++k) {
    while (j + 1 < ref.t.size() && std::abs(ref.t[j + 1] - run.snap_t[k]) <
                                       std::abs(ref.t[j] - run.snap_t[k]))
      ++j;
    double e = std::exp(-run.snap_t[k]);
    const Eigen::ArrayXd& prof = run.snap_u[k];
    double acc = 0.0;
    for (int i = 0; i < m; ++i) {
      double u = e * rho_fine[i] + ref.a[j] * fine.cosx[i] + ref.b[j] * fine.sinx[i];
      double d = prof[bin_of[i]] - u;
      acc += d * d;
    }
    sup = std::max(sup, std::sqrt(fine.weight() * acc));
  }
  return sup;
}

ChaosResult chaos_scaling(const SimSpec& base, const BumpSolution& bump,
                          const std::vector<int>& ns, int n_seeds,
                          int parallelism) {
  ChaosResult result;
  int total = static_cast<int>(ns.size()) * n_seeds;
  std::vector<double> sups(total, 0.0);
  std::vector<std::string> errors(total);

  parallel_for(total, effective_parallelism(parallelism), [&](int idx) {
    int in = idx / n_seeds;
    int is = idx % n_seeds;
    try {
      SimSpec spec = base;
      spec.n = ns[in];
      spec.seed = base.seed + static_cast<std::uint64_t>(idx);
      spec.record_events = false;
      SimRun run = run_simulation(spec, bump);
      sups[idx] = sup_flow_distance(run, bump, spec.init, spec.init_file);
    } catch (const std::exception& e) {
      errors[idx] = e.what();
      sups[idx] = -1.0;
    }
    (void)is;
  });

  std::vector<double> xs, ys;
  for (std::size_t in = 0; in < ns.size(); ++in) {
    std::vector<double> vals;
    for (int is = 0; is < n_seeds; ++is) {
      double v = sups[in * n_seeds + is];
      if (v >= 0.0) vals.push_back(v);
    }
    if (vals.empty()) throw SweepDegraded("all seeds failed at N = " +
                                          std::to_string(ns[in]));
    std::sort(vals.begin(), vals.end());
    double med = vals.size() % 2 == 1
                     ? vals[vals.size() / 2]
                     : 0.5 * (vals[vals.size() / 2 - 1] + vals[vals.size() / 2]);
    result.points.push_back({ns[in], med});
    xs.push_back(static_cast<double>(ns[in]));
    ys.push_back(med);
  }
  result.slope = log_log_slope(xs, ys);
  return result;
}

}  // namespace ringbumps
