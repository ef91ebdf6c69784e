#include <CLI11.hpp>
#include <chrono>
#include <filesystem>
#include <iostream>

#include "ringbumps/analysis.hpp"
#include "ringbumps/config.hpp"
#include "ringbumps/field_ops.hpp"
#include "ringbumps/nfe.hpp"
#include "ringbumps/runner.hpp"

namespace fs = std::filesystem;
using namespace ringbumps;

namespace {

constexpr const char* kVersion = "1.0.0";

struct RunContext {
  RunConfig cfg;
  std::string subcommand;
  std::chrono::steady_clock::time_point start =
      std::chrono::steady_clock::now();
  std::vector<std::pair<std::string, std::string>> extra;
  std::vector<std::string> files;

  std::string out(const std::string& name) {
    files.push_back(name);
    return (fs::path(cfg.directory) / name).string();
  }

  void note(const std::string& k, const std::string& v) {
    extra.emplace_back(k, v);
  }

  void finish() {
    double secs = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - start)
                      .count();
    std::vector<std::pair<std::string, std::string>> kv;
    kv.emplace_back("artifact_version", kVersion);
    kv.emplace_back("subcommand", subcommand);
    kv.emplace_back("config_hash", std::to_string(cfg.hash()));
    kv.emplace_back("seed", std::to_string(cfg.seed));
    kv.emplace_back("wall_time_s", format_number(secs));
    for (auto& e : extra) kv.push_back(e);
    std::string all_files;
    for (auto& f : files) all_files += (all_files.empty() ? "" : " ") + f;
    kv.emplace_back("files", all_files);
    write_manifest((fs::path(cfg.directory) / "manifest.txt").string(), kv);
    std::ofstream cfg_out(fs::path(cfg.directory) / "config_used.ini");
    cfg_out << cfg.to_text();
  }
};

BumpSolution solve_bump(const RunConfig& cfg) {
  return solve_amplitude(cfg.firing(), Branch::Largest);
}

SimSpec spec_from(const RunConfig& cfg) {
  SimSpec spec;
  spec.n = cfg.n;
  spec.f = cfg.firing();
  spec.init = init_kind_from_string(cfg.init_kind);
  spec.init_file = cfg.init_path;
  spec.t_end = cfg.t_end;
  spec.snapshot_dt = cfg.snapshot_dt;
  spec.seed = cfg.seed;
  return spec;
}

void cmd_stationary(RunContext& ctx) {
  BumpSolution sol = solve_bump(ctx.cfg);
  CsvWriter csv(ctx.out("stationary.csv"),
                {"kappa", "rho", "A", "residual", "I1", "gamma", "sigma"});
  csv.row(ctx.cfg.kappa, ctx.cfg.rho_threshold, sol.amplitude, sol.residual,
          sol.i1, sol.gamma, sol.sigma);
  ctx.note("amplitude", format_number(sol.amplitude));
}

void cmd_spectrum(RunContext& ctx, double phi, int m) {
  BumpSolution sol = solve_bump(ctx.cfg);
  PhaseFrame fr = PhaseFrame::make(sol, phi, m);
  SpectrumReport rep = spectrum(fr);
  CsvWriter csv(ctx.out("spectrum.csv"),
                {"index", "eigenvalue", "expected_cluster", "kernel_cosine_sim"});
  for (int i = 0; i < rep.eigenvalues.size(); ++i) {
    double ev = rep.eigenvalues[i];
    std::string cluster = "-1";
    if (std::abs(ev - sol.gamma) < std::abs(ev + 1.0) &&
        std::abs(ev - sol.gamma) < std::abs(ev))
      cluster = "gamma";
    else if (std::abs(ev) <= std::abs(ev + 1.0)) cluster = "0";
    csv.row(i, ev, cluster, rep.kernel_cosine_sim);
  }
  ctx.note("gamma", format_number(sol.gamma));
  ctx.note("gamma_eig", format_number(rep.gamma_eig));
  ctx.note("kernel_cosine_sim", format_number(rep.kernel_cosine_sim));
}

void cmd_nfe(RunContext& ctx, double dt) {
  BumpSolution sol = solve_bump(ctx.cfg);
  QuadGrid g = QuadGrid::make(512);
  Eigen::ArrayXd rho0 = initial_profile(
      g, init_kind_from_string(ctx.cfg.init_kind), sol.amplitude);
  CsvWriter csv(ctx.out("nfe.csv"),
                {"t", "a", "b", "dist_to_manifold", "variational_phase"});
  flow(g, sol.f, rho0, ctx.cfg.t_end, dt,
       [&](const FlowState& st) {
         Eigen::ArrayXd u = flow_field(g, st);
         double dist = manifold_distance(g, u, sol.amplitude);
         double phase = std::numeric_limits<double>::quiet_NaN();
         try {
           phase = variational_phase(g, u, sol);
         } catch (const TooFarFromManifold&) {
         }
         csv.row(st.t, st.a, st.b, dist, phase);
       },
       ctx.cfg.snapshot_dt);
}

void write_spacetime(RunContext& ctx, const SimRun& run,
                     const std::string& csv_name, const std::string& svg_name,
                     const std::string& title) {
  CsvWriter csv(ctx.out(csv_name), {"t", "i", "U"});
  for (std::size_t k = 0; k < run.snap_t.size(); ++k)
    for (int i = 0; i < run.grid.n; ++i)
      csv.row(run.snap_t[k], i + 1, run.snap_u[k][i]);
  if (ctx.cfg.emit_svg)
    svg_heatmap(ctx.out(svg_name), run.snap_t, run.grid.x, run.snap_u, title);
}

void cmd_simulate(RunContext& ctx) {
  BumpSolution sol = solve_bump(ctx.cfg);
  SimSpec spec = spec_from(ctx.cfg);
  SimRun run = run_simulation(spec, sol);
  CsvWriter events(ctx.out("events.csv"), {"time", "neuron"});
  for (const auto& e : run.events) events.row(e.time, e.neuron + 1);
  write_spacetime(ctx, run, "snapshots.csv", "voltage.svg", "voltage profile");
  ctx.note("events_total", std::to_string(run.events.size()));
}

void cmd_phase_diffusion(RunContext& ctx, double burnin_c) {
  BumpSolution sol = solve_bump(ctx.cfg);
  SimSpec spec = spec_from(ctx.cfg);
  PhaseDiffusionResult res = phase_diffusion_sweep(
      spec, sol, ctx.cfg.n_replicas, ctx.cfg.parallelism, burnin_c);

  CsvWriter traces(ctx.out("traces.csv"),
                   {"replica", "tau", "theta_unwrapped", "valid"});
  for (std::size_t r = 0; r < res.replicas.size(); ++r) {
    const auto& rep = res.replicas[r];
    if (rep.failed) continue;
    for (std::size_t k = 0; k < rep.trace.tau.size(); ++k)
      traces.row(static_cast<int>(r), rep.trace.tau[k], rep.trace.theta[k],
                 static_cast<int>(rep.trace.valid[k]));
  }
  CsvWriter est(ctx.out("estimate.csv"),
                {"sigma_hat", "stderr", "r2", "sigma_theory", "n_replicas",
                 "sigma_hat_angle", "drift_z", "qv_mean", "qv_se"});
  est.row(res.estimate.sigma_hat, res.estimate.stderr_,
          res.estimate.r2_linearity, res.sigma_theory,
          res.estimate.n_replicas, res.sigma_hat_angle, res.estimate.drift_z,
          res.qv_mean, res.qv_se);
  ctx.note("sigma_hat", format_number(res.estimate.sigma_hat));
  ctx.note("sigma_theory", format_number(res.sigma_theory));
  ctx.note("n_failed", std::to_string(res.n_failed));
}

void cmd_chaos(RunContext& ctx, std::vector<int> ns, int n_seeds) {
  BumpSolution sol = solve_bump(ctx.cfg);
  SimSpec spec = spec_from(ctx.cfg);
  ChaosResult res =
      chaos_scaling(spec, sol, ns, n_seeds, ctx.cfg.parallelism);
  CsvWriter csv(ctx.out("scaling.csv"), {"N", "median_sup_dist", "slope"});
  for (const auto& p : res.points) csv.row(p.n, p.median_sup, res.slope);
  ctx.note("slope", format_number(res.slope));
}

void cmd_figure(RunContext& ctx, const std::string& which) {
  RunConfig& cfg = ctx.cfg;
  if (which == "fixed") {
    FiringFunction sig = FiringFunction::sigmoid(cfg.kappa, cfg.rho_threshold);
    FiringFunction hev = FiringFunction::heaviside(cfg.rho_threshold);
    CsvWriter csv(ctx.out("fixed.csv"), {"A", "G_sigmoid", "G_heaviside"});
    LineSeries s1{"G sigmoid", {}, {}}, s2{"G heaviside", {}, {}},
        s3{"identity", {}, {}};
    for (int k = 0; k <= 500; ++k) {
      double a = 2.5 * k / 500.0;
      double gs = amplitude_map(sig, a), gh = amplitude_map(hev, a);
      csv.row(a, gs, gh);
      s1.x.push_back(a); s1.y.push_back(gs);
      s2.x.push_back(a); s2.y.push_back(gh);
      s3.x.push_back(a); s3.y.push_back(a);
    }
    CsvWriter cross(ctx.out("fixed_crossings.csv"), {"kind", "root"});
    for (double r : amplitude_roots(sig)) cross.row("sigmoid", r);
    auto hr = heaviside_fixed_points(cfg.rho_threshold);
    cross.row("heaviside", hr.zero);
    cross.row("heaviside", hr.lower);
    cross.row("heaviside", hr.upper);
    if (cfg.emit_svg)
      svg_lineplot(ctx.out("fixed.svg"), {s1, s2, s3}, "amplitude map");
  } else if (which == "wandering1") {
    cfg.init_kind = "bump-plus-mode2";
    BumpSolution sol = solve_bump(cfg);
    SimRun run = run_simulation(spec_from(cfg), sol);
    write_spacetime(ctx, run, "spacetime.csv", "wandering.svg",
                    "voltage, bump-plus-mode2 start");
    ProximityReport rep = proximity_report(run, sol);
    ctx.note("sup_dist", format_number(rep.sup_dist));
    ctx.note("events_total", std::to_string(run.events.size()));
  } else if (which == "wandering3") {
    cfg.init_kind = "quarter-bump";
    if (cfg.t_end > 5.0) cfg.t_end = 5.0;
    if (cfg.snapshot_dt > 0.05) cfg.snapshot_dt = 0.05;
    BumpSolution sol = solve_bump(cfg);
    SimRun run = run_simulation(spec_from(cfg), sol);
    write_spacetime(ctx, run, "spacetime.csv", "collapse.svg",
                    "voltage, quarter-bump start");
    double final_norm = profile_l2_norm(run.grid, run.snap_u.back());
    ctx.note("final_l2_norm", format_number(final_norm));
    ctx.note("collapse_threshold",
             format_number(0.2 * sol.amplitude * std::sqrt(kPi)));
  } else {
    throw ConfigError("unknown figure: " + which);
  }
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;

  // two-phase parse: a --config file provides defaults, flags override
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--config") {
      try {
        cfg = RunConfig::from_file(argv[i + 1]);
      } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
      }
    }
  }

  CLI::App app{"ring-model spiking network and field-equation toolkit"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "config file (applies to all)");

  auto add_model = [&](CLI::App* sub) {
    sub->add_option("--config", config_path);
    sub->add_option("--n", cfg.n, "population size");
    sub->add_option("--kappa", cfg.kappa, "sigmoid slope scale");
    sub->add_option("--rho-threshold", cfg.rho_threshold, "firing threshold");
    sub->add_option("--firing", cfg.firing_kind, "sigmoid|heaviside");
    sub->add_option("--out", cfg.directory, "output directory");
    sub->add_flag("--svg,!--no-svg", cfg.emit_svg, "emit SVG plots");
  };
  auto add_sim = [&](CLI::App* sub) {
    sub->add_option("--t-end", cfg.t_end, "simulation end time");
    sub->add_option("--snapshot-dt", cfg.snapshot_dt, "snapshot interval");
    sub->add_option("--seed", cfg.seed, "base seed");
    sub->add_option("--init", cfg.init_kind,
                    "bump|bump-plus-mode2|quarter-bump|zero|file");
    sub->add_option("--init-file", cfg.init_path, "profile file for --init file");
  };

  auto* c_stat = app.add_subcommand("stationary", "solve the bump amplitude");
  add_model(c_stat);

  double phi = 0.0;
  int m_grid = 512;
  auto* c_spec = app.add_subcommand("spectrum", "discretized operator spectrum");
  add_model(c_spec);
  c_spec->add_option("--phi", phi, "frame phase");
  c_spec->add_option("--m-grid", m_grid, "quadrature points");

  double flow_dt = 1e-3;
  auto* c_nfe = app.add_subcommand("nfe", "integrate the field equation");
  add_model(c_nfe);
  add_sim(c_nfe);
  c_nfe->add_option("--dt", flow_dt, "integrator step");

  auto* c_sim = app.add_subcommand("simulate", "event-driven spiking run");
  add_model(c_sim);
  add_sim(c_sim);

  double burnin_c = 5.0;
  auto* c_pd = app.add_subcommand("phase-diffusion",
                                  "replica sweep and diffusion estimate");
  add_model(c_pd);
  add_sim(c_pd);
  c_pd->add_option("--replicas", cfg.n_replicas, "replica count");
  c_pd->add_option("--parallelism", cfg.parallelism, "worker threads");
  c_pd->add_option("--burnin-c", burnin_c, "burn-in constant C in C log N");

  std::vector<int> chaos_ns{125, 250, 500, 1000};
  int chaos_seeds = 20;
  auto* c_chaos = app.add_subcommand("chaos", "finite-size error scaling");
  add_model(c_chaos);
  add_sim(c_chaos);
  c_chaos->add_option("--n-list", chaos_ns, "population sizes");
  c_chaos->add_option("--seeds", chaos_seeds, "seeds per size");
  c_chaos->add_option("--parallelism", cfg.parallelism, "worker threads");

  std::string figure_name;
  auto* c_fig = app.add_subcommand("figure", "reproduce a reference figure");
  add_model(c_fig);
  add_sim(c_fig);
  c_fig->add_option("name", figure_name, "fixed|wandering1|wandering3")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    cfg.validate();
    fs::create_directories(cfg.directory);

    RunContext ctx;
    ctx.cfg = cfg;
    if (c_stat->parsed()) {
      ctx.subcommand = "stationary";
      cmd_stationary(ctx);
    } else if (c_spec->parsed()) {
      ctx.subcommand = "spectrum";
      cmd_spectrum(ctx, phi, m_grid);
    } else if (c_nfe->parsed()) {
      ctx.subcommand = "nfe";
      cmd_nfe(ctx, flow_dt);
    } else if (c_sim->parsed()) {
      ctx.subcommand = "simulate";
      cmd_simulate(ctx);
    } else if (c_pd->parsed()) {
      ctx.subcommand = "phase-diffusion";
      cmd_phase_diffusion(ctx, burnin_c);
    } else if (c_chaos->parsed()) {
      ctx.subcommand = "chaos";
      cmd_chaos(ctx, chaos_ns, chaos_seeds);
    } else if (c_fig->parsed()) {
      ctx.subcommand = "figure-" + figure_name;
      cmd_figure(ctx, figure_name);
    }
    ctx.finish();
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
