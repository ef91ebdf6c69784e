#pragma once

#include <Eigen/Dense>

#include "ringbumps/field.hpp"
#include "ringbumps/stationary.hpp"

namespace ringbumps {

// Everything needed to work in the weighted geometry attached to the bump at
// phase phi: the bump u = A cos(.+phi), the tangent v = -A sin(.+phi), and the
// weight f'(u). Immutable after construction; cheap to share.
struct PhaseFrame {
  BumpSolution bump;
  double phi = 0.0;
  QuadGrid grid;
  Eigen::ArrayXd u, v;
  Eigen::ArrayXd weight;   // f'(u)
  double nv2 = 0.0;        // <v,v>_w, equals A^2 analytically
  double nu2 = 0.0;        // <u,u>_w, equals A^2 (i1 - 1) analytically

  static PhaseFrame make(const BumpSolution& bump, double phi, int m = 512);
};

// int_S g1 g2 f'(u_phi) dx
double weighted_inner(const PhaseFrame& fr, const Eigen::ArrayXd& g1,
                      const Eigen::ArrayXd& g2);

// T psi = int cos(x - y) f'(u_phi(y)) psi(y) dy, evaluated through the exact
// rank-2 expansion of the cosine kernel; the result is a degree-1
// trigonometric polynomial.
Eigen::ArrayXd apply_T(const PhaseFrame& fr, const Eigen::ArrayXd& psi);

// L psi = -psi + T psi
Eigen::ArrayXd apply_L(const PhaseFrame& fr, const Eigen::ArrayXd& psi);

struct Projection {
  Eigen::ArrayXd circ;   // orthogonal projection onto span(v)
  Eigen::ArrayXd perp;   // g - circ
  double alpha_circ = 0.0;   // <g,v>_w / ||v||_w
  double alpha_gamma = 0.0;  // <g,u>_w / ||u||_w
};
Projection project(const PhaseFrame& fr, const Eigen::ArrayXd& g);

// e^{tL} g via the three-eigenspace decomposition {0 on span v, gamma on
// span u, -1 on the rest}; no time stepping. Throws InvalidTime for t < 0.
Eigen::ArrayXd semigroup_apply(const PhaseFrame& fr, double t,
                               const Eigen::ArrayXd& g);

// Dense kernel-quadrature matrix of L; retained as a test oracle and for the
// discretized eigenproblem (it is never used on the fast path).
Eigen::MatrixXd dense_operator(const PhaseFrame& fr);

struct SpectrumReport {
  Eigen::VectorXd eigenvalues;      // ascending
  double gamma_eig = 0.0;           // eigenvalue nearest the gamma cluster
  double kernel_eig = 0.0;          // eigenvalue nearest 0
  double kernel_cosine_sim = 0.0;   // |cos| similarity of 0-eigenvector vs v
  int count_minus_one = 0;          // cluster sizes at tolerance 1e-6
  int count_gamma = 0;
  int count_zero = 0;
};

// Symmetric generalized eigensolve of the discretized operator in the
// weighted metric (similarity transform by sqrt of the diagonal weight).
SpectrumReport spectrum(const PhaseFrame& fr);

}  // namespace ringbumps
