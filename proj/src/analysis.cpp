#include "ringbumps/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "ringbumps/nfe.hpp"
#include "ringbumps/rng.hpp"

namespace ringbumps {

double manifold_distance(const QuadGrid& g, const Eigen::ArrayXd& u,
                         double amplitude) {
  double c = quad_integrate(g, u * g.cosx) / kPi;
  double s = quad_integrate(g, u * g.sinx) / kPi;
  // squared residual integrated directly so the perpendicular part does not
  // cancel against ||u||^2 when the field is close to the manifold
  Eigen::ArrayXd perp = u - c * g.cosx - s * g.sinx;
  double n2perp = quad_integrate(g, perp * perp);
  double r = std::sqrt(c * c + s * s);
  return std::sqrt(n2perp + kPi * (r - amplitude) * (r - amplitude));
}

namespace {

struct ProfileMoments {
  double c = 0.0, s = 0.0, n2 = 0.0;
};

// exact integrals of a piecewise-constant profile against 1, cos, sin
ProfileMoments profile_moments(const RingGrid& grid,
                               const Eigen::ArrayXd& profile) {
  ProfileMoments m;
  double int_cos = 0.0, int_sin = 0.0;
  double sin_prev = std::sin(-kPi), cos_prev = std::cos(-kPi);
  for (int i = 0; i < grid.n; ++i) {
    double sin_i = std::sin(grid.x[i]), cos_i = std::cos(grid.x[i]);
    int_cos += profile[i] * (sin_i - sin_prev);
    int_sin += profile[i] * (cos_prev - cos_i);
    sin_prev = sin_i;
    cos_prev = cos_i;
  }
  m.c = int_cos / kPi;
  m.s = int_sin / kPi;
  m.n2 = grid.spacing() * profile.square().sum();
  return m;
}

}  // namespace

double manifold_distance_profile(const RingGrid& grid,
                                 const Eigen::ArrayXd& profile,
                                 double amplitude) {
  ProfileMoments m = profile_moments(grid, profile);
  return manifold_distance_from_moments(m.n2, m.c, m.s, amplitude);
}

double profile_variational_phase(const RingGrid& grid,
                                 const Eigen::ArrayXd& profile,
                                 const BumpSolution& bump, double radius) {
  const double A = bump.amplitude;
  if (radius < 0.0) radius = 0.5 * A * std::sqrt(kPi);
  ProfileMoments m = profile_moments(grid, profile);
  double dist = manifold_distance_from_moments(m.n2, m.c, m.s, A);
  if (dist > radius)
    throw TooFarFromManifold("profile distance " + std::to_string(dist) +
                             " exceeds projection radius");

  const FiringFunction& f = bump.f;
  auto F = [&](double phi) {
    double acc = 0.0;
    double prev = f(A * std::cos(-kPi + phi));
    for (int i = 0; i < grid.n; ++i) {
      double cur = f(A * std::cos(grid.x[i] + phi));
      acc += profile[i] * (cur - prev);
      prev = cur;
    }
    return acc;
  };

  const double tol = 1e-10;
  double phi = std::atan2(-m.s, m.c);
  double fval = F(phi);
  for (int it = 0; it < 60 && std::abs(fval) > tol; ++it) {
    phi = wrap_angle(phi + fval / (A * A));
    fval = F(phi);
  }
  if (std::abs(fval) > tol)
    throw TooFarFromManifold("no variational root for profile");
  return wrap_angle(phi);
}

int PhaseTrace::valid_count() const {
  int c = 0;
  for (auto v : valid) c += v != 0;
  return c;
}

std::vector<double> unwrap_phases(const std::vector<double>& wrapped) {
  std::vector<double> out(wrapped.size());
  if (wrapped.empty()) return out;
  out[0] = wrapped[0];
  for (std::size_t k = 1; k < wrapped.size(); ++k)
    out[k] = out[k - 1] + wrap_angle(wrapped[k] - wrapped[k - 1]);
  return out;
}

PhaseTrace phase_trace(const SimRun& run, const BumpSolution& bump,
                       PhaseMode mode, double burnin_c) {
  PhaseTrace tr;
  tr.n = run.grid.n;
  tr.burnin_t = burnin_c * std::log(static_cast<double>(run.grid.n));

  std::vector<double> wrapped;
  QuadGrid qg;  // built lazily for the isochronal mode
  for (std::size_t k = 0; k < run.snap_t.size(); ++k) {
    if (run.snap_t[k] < tr.burnin_t) continue;
    double phi = 0.0;
    bool ok = true;
    try {
      if (mode == PhaseMode::Variational) {
        phi = profile_variational_phase(run.grid, run.snap_u[k], bump);
      } else {
        if (qg.m == 0) qg = QuadGrid::make(512);
        Eigen::ArrayXd field(qg.m);
        for (int j = 0; j < qg.m; ++j) {
          // value of the bin containing the node
          int bin = std::min(
              run.grid.n - 1,
              static_cast<int>((qg.x[j] + kPi) / run.grid.spacing()));
          field[j] = run.snap_u[k][bin];
        }
        phi = isochronal_phase(qg, field, bump).theta;
      }
    } catch (const Error&) {
      ok = false;
    }
    tr.tau.push_back(run.snap_t[k] / run.grid.n);
    wrapped.push_back(ok ? phi : std::numeric_limits<double>::quiet_NaN());
    tr.valid.push_back(ok ? 1 : 0);
  }

  // unwrap across valid samples only
  tr.theta.assign(wrapped.size(), std::numeric_limits<double>::quiet_NaN());
  double last = 0.0;
  bool have_last = false;
  for (std::size_t k = 0; k < wrapped.size(); ++k) {
    if (!tr.valid[k]) continue;
    if (!have_last) {
      tr.theta[k] = wrapped[k];
      have_last = true;
    } else {
      tr.theta[k] = last + wrap_angle(wrapped[k] - last);
    }
    last = tr.theta[k];
  }

  if (!tr.valid.empty() &&
      tr.valid_count() < 0.9 * static_cast<double>(tr.valid.size()))
    throw TraceUnreliable("more than 10% of phase samples failed to project");
  return tr;
}

namespace {

struct Pool {
  std::vector<double> widths;              // in tau units
  std::vector<std::vector<double>> incs;   // per width, pooled over replicas
};

Pool collect_increments(const std::vector<PhaseTrace>& traces,
                        const std::vector<int>& replica_ids) {
  std::size_t len = SIZE_MAX;
  for (int r : replica_ids) len = std::min(len, traces[r].theta.size());
  if (len < 17) throw InsufficientData("traces too short for 4 window widths");
  int base = static_cast<int>((len - 1) / 16);
  double dtau = traces[replica_ids[0]].tau[1] - traces[replica_ids[0]].tau[0];

  Pool pool;
  for (int j = 1; j <= 4; ++j) {
    int stride = j * base;
    pool.widths.push_back(stride * dtau);
    std::vector<double> incs;
    for (int r : replica_ids) {
      const PhaseTrace& tr = traces[r];
      for (std::size_t k = 0; k + stride < len; k += stride) {
        if (!tr.valid[k] || !tr.valid[k + stride]) continue;
        incs.push_back(tr.theta[k + stride] - tr.theta[k]);
      }
    }
    pool.incs.push_back(std::move(incs));
  }
  return pool;
}

struct Fit {
  double slope = 0.0, intercept = 0.0, r2 = 0.0;
};

Fit fit_variance_line(const Pool& pool) {
  std::vector<double> vars;
  for (const auto& incs : pool.incs) {
    if (incs.size() < 2) throw InsufficientData("not enough increments");
    double mean = 0.0;
    for (double v : incs) mean += v;
    mean /= incs.size();
    double var = 0.0;
    for (double v : incs) var += (v - mean) * (v - mean);
    var /= (incs.size() - 1);
    vars.push_back(var);
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  int n = static_cast<int>(vars.size());
  for (int i = 0; i < n; ++i) {
    sx += pool.widths[i]; sy += vars[i];
    sxx += pool.widths[i] * pool.widths[i];
    sxy += pool.widths[i] * vars[i];
    syy += vars[i] * vars[i];
  }
  Fit fit;
  double den = n * sxx - sx * sx;
  fit.slope = (n * sxy - sx * sy) / den;
  fit.intercept = (sy - fit.slope * sx) / n;
  double ss_res = 0.0, ss_tot = 0.0, ybar = sy / n;
  for (int i = 0; i < n; ++i) {
    double pred = fit.intercept + fit.slope * pool.widths[i];
    ss_res += (vars[i] - pred) * (vars[i] - pred);
    ss_tot += (vars[i] - ybar) * (vars[i] - ybar);
  }
  fit.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

}  // namespace

DiffusionEstimate estimate_sigma(const std::vector<PhaseTrace>& traces) {
  if (traces.size() < 2)
    throw InsufficientData("estimate_sigma needs at least 2 traces");
  int nr = static_cast<int>(traces.size());
  std::vector<int> all(nr);
  for (int i = 0; i < nr; ++i) all[i] = i;

  Pool pool = collect_increments(traces, all);
  Fit fit = fit_variance_line(pool);

  DiffusionEstimate est;
  est.n_replicas = nr;
  est.sigma_hat = std::sqrt(std::max(0.0, fit.slope));
  est.r2_linearity = fit.r2;

  // drift: pooled increments at the smallest width
  {
    const auto& incs = pool.incs[0];
    double mean = 0.0;
    for (double v : incs) mean += v;
    mean /= incs.size();
    double var = 0.0;
    for (double v : incs) var += (v - mean) * (v - mean);
    var /= (incs.size() - 1);
    double se = std::sqrt(var / incs.size());
    est.drift_z = se > 0.0 ? std::abs(mean) / se
                           : (mean == 0.0 ? 0.0 : HUGE_VAL);
  }

  // replica bootstrap for the standard error of sigma_hat
  Rng rng(0x5eedUL);
  const int n_boot = 200;
  std::vector<double> boots;
  boots.reserve(n_boot);
  for (int b = 0; b < n_boot; ++b) {
    std::vector<int> ids(nr);
    for (int i = 0; i < nr; ++i)
      ids[i] = static_cast<int>(rng.below(static_cast<std::uint64_t>(nr)));
    try {
      Fit fb = fit_variance_line(collect_increments(traces, ids));
      boots.push_back(std::sqrt(std::max(0.0, fb.slope)));
    } catch (const InsufficientData&) {
    }
  }
  if (boots.size() > 1) {
    double mean = 0.0;
    for (double v : boots) mean += v;
    mean /= boots.size();
    double var = 0.0;
    for (double v : boots) var += (v - mean) * (v - mean);
    est.stderr_ = std::sqrt(var / (boots.size() - 1));
  }
  return est;
}

ProximityReport proximity_report(const SimRun& run, const BumpSolution& bump,
                                 double burnin_c) {
  ProximityReport rep;
  rep.window_begin = burnin_c * std::log(static_cast<double>(run.grid.n));
  rep.window_end = run.t_end;
  for (std::size_t k = 0; k < run.snap_t.size(); ++k) {
    if (run.snap_t[k] < rep.window_begin) continue;
    rep.sup_dist = std::max(
        rep.sup_dist,
        manifold_distance_profile(run.grid, run.snap_u[k], bump.amplitude));
  }
  return rep;
}

double realized_phase_qv(const SimRun& run, const PhaseTrace& trace) {
  if (trace.tau.empty()) return 0.0;
  const double coef = kTwoPi / run.grid.n;
  double qv = 0.0;
  std::size_t k = 0;  // snapshot cursor
  for (const auto& ev : run.events) {
    double tau = ev.time / run.grid.n;
    if (tau < trace.tau.front()) continue;
    while (k + 1 < trace.tau.size() && trace.tau[k + 1] <= tau) ++k;
    if (!trace.valid[k]) continue;
    double s = std::sin(run.grid.x[ev.neuron] + trace.theta[k]);
    qv += coef * coef * s * s;
  }
  return qv;
}

}  // namespace ringbumps
