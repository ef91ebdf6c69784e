#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "ringbumps/errors.hpp"

namespace ringbumps {

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTwoPi = 2.0 * kPi;

// N regularly spaced neuron positions on S = (-pi, pi]:
//   x_i = pi (2i - N) / N, i = 1..N  (stored 0-based: x[k] is x_{k+1})
// together with the bin partition B_i = (x_{i-1}, x_i], x_0 = -pi.
struct RingGrid {
  int n = 0;
  Eigen::ArrayXd x;

  static RingGrid make(int n) {
    if (n < 1) throw InvalidSize("RingGrid requires n >= 1");
    RingGrid g;
    g.n = n;
    g.x.resize(n);
    for (int k = 0; k < n; ++k)
      g.x[k] = kPi * static_cast<double>(2 * (k + 1) - n) / n;
    return g;
  }

  double spacing() const { return kTwoPi / n; }
  // left endpoint of bin i (0-based); bin i is (bin_left(i), x[i]]
  double bin_left(int i) const { return i == 0 ? -kPi : x[i - 1]; }
};

inline double wrap_angle(double a) {
  // wrap to (-pi, pi]
  a = std::fmod(a + kPi, kTwoPi);
  if (a <= 0.0) a += kTwoPi;
  return a - kPi;
}

}  // namespace ringbumps
