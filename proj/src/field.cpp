#include "ringbumps/field.hpp"

namespace ringbumps {

QuadGrid QuadGrid::make(int m) {
  if (m < 64 || m % 2 != 0)
    throw InvalidSize("QuadGrid requires even m >= 64");
  QuadGrid g;
  g.m = m;
  g.x.resize(m);
  for (int k = 0; k < m; ++k)
    g.x[k] = kPi * static_cast<double>(2 * (k + 1) - m) / m;
  g.cosx = g.x.cos();
  g.sinx = g.x.sin();
  return g;
}

Field cosine_field(const QuadGrid& g, double amplitude, double phase) {
  Field f;
  f.v = amplitude * (g.x + phase).cos();
  f.cosine = CosineTag{amplitude, phase};
  return f;
}

Field general_field(Eigen::ArrayXd samples) {
  Field f;
  f.v = std::move(samples);
  return f;
}

}  // namespace ringbumps
