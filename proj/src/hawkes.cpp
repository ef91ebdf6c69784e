#include "ringbumps/hawkes.hpp"

#include <cmath>
#include <fstream>

#include "ringbumps/errors.hpp"

namespace ringbumps {

HawkesState init_state(const HawkesParams& params) {
  if (params.rho.size() != params.grid.n)
    throw ConfigError("rho must be sampled at the grid positions");
  HawkesState st;
  st.params = params;
  st.counts.assign(params.grid.n, 0);
  st.compensators = Eigen::ArrayXd::Zero(params.grid.n);
  st.rng = Rng(params.seed);
  st.cosx = params.grid.x.cos();
  st.sinx = params.grid.x.sin();
  st.last_f = params.f(params.rho);
  return st;
}

double jump_increment(const RingGrid& grid, int i, int j) {
  return kTwoPi / grid.n * std::cos(grid.x[i] - grid.x[j]);
}

Eigen::ArrayXd voltage_profile(const HawkesState& st) {
  return st.params.rho * st.decay0 + st.cosx * st.p + st.sinx * st.q;
}

namespace {

void spill_events(HawkesState& st) {
  if (st.events.size() <= st.params.event_capacity) return;
  if (st.params.spill_path.empty())
    return;  // no sink configured: keep in memory
  std::ofstream out(st.params.spill_path, std::ios::app);
  if (!out) throw IoError("cannot open event spill file " + st.params.spill_path);
  for (const auto& e : st.events) {
    char line[64];
    std::snprintf(line, sizeof(line), "%.17g,%d\n", e.time, e.neuron);
    out << line;
  }
  st.events_spilled += st.events.size();
  st.events.clear();
}

}  // namespace

void simulate_until(HawkesState& st, double t_end) {
  if (!(t_end > st.t)) throw ConfigError("simulate_until requires t_end > t");
  const int n = st.params.grid.n;
  const double kick = kTwoPi / n;
  const bool track = st.params.track_compensators;
  const FiringFunction& f = st.params.f;

  Eigen::ArrayXd now_f(track ? n : 0);

  while (true) {
    if (st.pending_proposal < st.t)
      st.pending_proposal = st.t + st.rng.exponential() / n;
    bool beyond = st.pending_proposal > t_end;
    double step = (beyond ? t_end : st.pending_proposal) - st.t;
    double decay = std::exp(-step);

    st.p *= decay;
    st.q *= decay;
    st.decay0 *= decay;
    st.t += step;

    if (track) {
      now_f = f(voltage_profile(st));
      st.compensators += 0.5 * step * (st.last_f + now_f);
      st.last_f.swap(now_f);
    }
    if (beyond) {
      st.t = t_end;
      break;
    }
    st.t = st.pending_proposal;
    st.pending_proposal = -1.0;

    int i = static_cast<int>(st.rng.below(static_cast<std::uint64_t>(n)));
    double u_i =
        st.params.rho[i] * st.decay0 + st.cosx[i] * st.p + st.sinx[i] * st.q;
    if (st.rng.uniform() < f(u_i)) {
      st.p += kick * st.cosx[i];
      st.q += kick * st.sinx[i];
      ++st.counts[i];
      st.events.push_back({st.t, i});
      ++st.events_total;
      if (st.events.size() > st.params.event_capacity) spill_events(st);
      if (track) st.last_f = f(voltage_profile(st));
    }

    if (!(std::isfinite(st.p) && std::isfinite(st.q)))
      throw NumericalBlowup("rank-2 state is not finite");
  }
}

Eigen::ArrayXd martingale_residual(const HawkesState& st) {
  Eigen::ArrayXd res(st.params.grid.n);
  for (int i = 0; i < st.params.grid.n; ++i)
    res[i] = static_cast<double>(st.counts[i]) - st.compensators[i];
  return res;
}

double profile_l2_norm(const RingGrid& grid, const Eigen::ArrayXd& profile) {
  return std::sqrt(grid.spacing() * profile.square().sum());
}

}  // namespace ringbumps
