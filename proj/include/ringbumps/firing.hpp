#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "ringbumps/errors.hpp"

namespace ringbumps {

enum class FiringKind { Sigmoid, Heaviside };

// Firing nonlinearity: logistic sigmoid with slope scale kappa and threshold
// rho, or the Heaviside limit 1_{u >= rho}. Values are bounded by 1, which is
// what makes the constant dominating rate in the event simulator exact.
struct FiringFunction {
  FiringKind kind = FiringKind::Sigmoid;
  double kappa = 0.1;
  double rho = 0.5;

  static FiringFunction sigmoid(double kappa, double rho) {
    if (!(kappa > 0.0)) throw ConfigError("sigmoid requires kappa > 0");
    return {FiringKind::Sigmoid, kappa, rho};
  }
  static FiringFunction heaviside(double rho) {
    return {FiringKind::Heaviside, 0.0, rho};
  }

  double operator()(double u) const {
    if (kind == FiringKind::Heaviside) return u >= rho ? 1.0 : 0.0;
    double z = (u - rho) / kappa;
    if (z > 700.0) z = 700.0;
    if (z < -700.0) z = -700.0;
    return 1.0 / (1.0 + std::exp(-z));
  }

  // f'(u) = f(u)(1 - f(u)) / kappa
  double deriv(double u) const {
    require_smooth();
    double v = (*this)(u);
    return v * (1.0 - v) / kappa;
  }

  // f''(u) = f(u)(1 - f(u))(1 - 2 f(u)) / kappa^2
  double deriv2(double u) const {
    require_smooth();
    double v = (*this)(u);
    return v * (1.0 - v) * (1.0 - 2.0 * v) / (kappa * kappa);
  }

  template <typename D>
  Eigen::ArrayXd operator()(const Eigen::ArrayBase<D>& u) const {
    return u.unaryExpr([this](double x) { return (*this)(x); });
  }
  template <typename D>
  Eigen::ArrayXd deriv(const Eigen::ArrayBase<D>& u) const {
    require_smooth();
    return u.unaryExpr([this](double x) { return deriv(x); });
  }
  template <typename D>
  Eigen::ArrayXd deriv2(const Eigen::ArrayBase<D>& u) const {
    require_smooth();
    return u.unaryExpr([this](double x) { return deriv2(x); });
  }

 private:
  void require_smooth() const {
    if (kind == FiringKind::Heaviside)
      throw UnsupportedDerivative(
          "Heaviside firing has no pointwise derivative");
  }
};

inline double firing_eval(const FiringFunction& f, double u) { return f(u); }

inline double firing_deriv(const FiringFunction& f, double u, int order) {
  if (order == 1) return f.deriv(u);
  if (order == 2) return f.deriv2(u);
  throw ConfigError("firing_deriv: order must be 1 or 2");
}

}  // namespace ringbumps
