#include "ringbumps/field_ops.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace ringbumps {

PhaseFrame PhaseFrame::make(const BumpSolution& bump, double phi, int m) {
  PhaseFrame fr;
  fr.bump = bump;
  fr.phi = phi;
  fr.grid = QuadGrid::make(m);
  fr.u = bump.amplitude * (fr.grid.x + phi).cos();
  fr.v = -bump.amplitude * (fr.grid.x + phi).sin();
  fr.weight = bump.f.deriv(fr.u);
  fr.nv2 = quad_integrate(fr.grid, fr.v * fr.v * fr.weight);
  fr.nu2 = quad_integrate(fr.grid, fr.u * fr.u * fr.weight);
  return fr;
}

double weighted_inner(const PhaseFrame& fr, const Eigen::ArrayXd& g1,
                      const Eigen::ArrayXd& g2) {
  return quad_integrate(fr.grid, g1 * g2 * fr.weight);
}

Eigen::ArrayXd apply_T(const PhaseFrame& fr, const Eigen::ArrayXd& psi) {
  // cos(x-y) = cos x cos y + sin x sin y makes T exactly rank 2
  double a = quad_integrate(fr.grid, fr.grid.cosx * fr.weight * psi);
  double b = quad_integrate(fr.grid, fr.grid.sinx * fr.weight * psi);
  return a * fr.grid.cosx + b * fr.grid.sinx;
}

Eigen::ArrayXd apply_L(const PhaseFrame& fr, const Eigen::ArrayXd& psi) {
  return apply_T(fr, psi) - psi;
}

Projection project(const PhaseFrame& fr, const Eigen::ArrayXd& g) {
  Projection p;
  double gv = weighted_inner(fr, g, fr.v);
  double gu = weighted_inner(fr, g, fr.u);
  p.circ = (gv / fr.nv2) * fr.v;
  p.perp = g - p.circ;
  p.alpha_circ = gv / std::sqrt(fr.nv2);
  p.alpha_gamma = gu / std::sqrt(fr.nu2);
  return p;
}

Eigen::ArrayXd semigroup_apply(const PhaseFrame& fr, double t,
                               const Eigen::ArrayXd& g) {
  if (t < 0.0) throw InvalidTime("semigroup requires t >= 0");
  double c0 = weighted_inner(fr, g, fr.v) / fr.nv2;
  double cg = weighted_inner(fr, g, fr.u) / fr.nu2;
  Eigen::ArrayXd rest = g - c0 * fr.v - cg * fr.u;
  return c0 * fr.v + std::exp(fr.bump.gamma * t) * cg * fr.u +
         std::exp(-t) * rest;
}

Eigen::MatrixXd dense_operator(const PhaseFrame& fr) {
  const int m = fr.grid.m;
  const double w = fr.grid.weight();
  Eigen::MatrixXd L(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      L(i, j) = std::cos(fr.grid.x[i] - fr.grid.x[j]) * fr.weight[j] * w;
  L.diagonal().array() -= 1.0;
  return L;
}

SpectrumReport spectrum(const PhaseFrame& fr) {
  const int m = fr.grid.m;
  const double w = fr.grid.weight();
  // similarity by sqrt(weight) keeps the discretization symmetric
  Eigen::ArrayXd sq = fr.weight.sqrt();
  Eigen::MatrixXd S(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      S(i, j) = sq[i] * std::cos(fr.grid.x[i] - fr.grid.x[j]) * sq[j] * w;
  S.diagonal().array() -= 1.0;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
  SpectrumReport rep;
  rep.eigenvalues = es.eigenvalues();

  const double gamma = fr.bump.gamma;
  int i_gamma = 0, i_zero = 0;
  for (int i = 0; i < m; ++i) {
    if (std::abs(rep.eigenvalues[i] - gamma) <
        std::abs(rep.eigenvalues[i_gamma] - gamma))
      i_gamma = i;
    if (std::abs(rep.eigenvalues[i]) < std::abs(rep.eigenvalues[i_zero]))
      i_zero = i;
  }
  rep.gamma_eig = rep.eigenvalues[i_gamma];
  rep.kernel_eig = rep.eigenvalues[i_zero];
  for (int i = 0; i < m; ++i) {
    double ev = rep.eigenvalues[i];
    if (std::abs(ev + 1.0) < 1e-6) ++rep.count_minus_one;
    else if (std::abs(ev - gamma) < 1e-6) ++rep.count_gamma;
    else if (std::abs(ev) < 1e-6) ++rep.count_zero;
  }

  // undo the similarity: eigenvector of L is W^{-1/2} times that of S
  Eigen::ArrayXd vec = es.eigenvectors().col(i_zero).array() / sq;
  double num = quad_integrate(fr.grid, vec * fr.v * fr.weight);
  double den = std::sqrt(quad_integrate(fr.grid, vec * vec * fr.weight) *
                         fr.nv2);
  rep.kernel_cosine_sim = std::abs(num) / den;
  return rep;
}

}  // namespace ringbumps
