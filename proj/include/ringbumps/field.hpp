#pragma once

#include <Eigen/Dense>
#include <optional>

#include "ringbumps/errors.hpp"
#include "ringbumps/grid.hpp"

namespace ringbumps {

// Uniform periodic quadrature grid on S, decoupled from the neuron count.
// The rectangle rule on this grid is exact for trigonometric polynomials of
// degree < m/2 and spectrally accurate for smooth periodic integrands.
struct QuadGrid {
  int m = 0;
  Eigen::ArrayXd x;
  Eigen::ArrayXd cosx, sinx;

  static QuadGrid make(int m = 512);
  double weight() const { return kTwoPi / m; }
};

template <typename D>
double quad_integrate(const QuadGrid& g, const Eigen::ArrayBase<D>& f) {
  return g.weight() * f.sum();
}

struct CosineTag {
  double amplitude = 0.0;
  double phase = 0.0;
};

// A real function on S sampled at the quadrature nodes. Fields built as pure
// cosines keep an analytic tag so manifold points never accrue sampling error.
struct Field {
  Eigen::ArrayXd v;
  std::optional<CosineTag> cosine;
};

Field cosine_field(const QuadGrid& g, double amplitude, double phase);
Field general_field(Eigen::ArrayXd samples);

inline double l2_norm(const QuadGrid& g, const Eigen::ArrayXd& f) {
  return std::sqrt(quad_integrate(g, f * f));
}

// min over phases of || u - A cos(.+phase) ||_2 given ||u||^2 and the first
// Fourier pair c = int u cos / pi, s = int u sin / pi. The minimizing phase
// is the Fourier angle atan2(-s, c).
inline double manifold_distance_from_moments(double norm2, double c, double s,
                                             double amplitude) {
  double r2 = c * c + s * s;
  double r = std::sqrt(r2);
  double d2 = norm2 - kPi * r2 + kPi * (r - amplitude) * (r - amplitude);
  return std::sqrt(std::max(0.0, d2));
}

}  // namespace ringbumps
