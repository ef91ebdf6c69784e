#pragma once

#include <vector>

#include "ringbumps/field.hpp"
#include "ringbumps/firing.hpp"

namespace ringbumps {

struct HeavisideRoots {
  double zero = 0.0;   // A = 0
  double lower = 0.0;  // sqrt(1+rho) - sqrt(1-rho)
  double upper = 0.0;  // sqrt(1+rho) + sqrt(1-rho)
};

// Closed-form fixed points of the amplitude map for Heaviside firing.
// Throws NoNonzeroSolution when |rho| > 1 (only A = 0 remains).
HeavisideRoots heaviside_fixed_points(double rho);

enum class Branch { Largest, Smallest };

// A stationary bump u = A cos(. + phi) together with the derived spectral
// constants: i1 = int f'(A cos), gamma = i1 - 2 (relaxation rate toward the
// manifold) and sigma, the phase-diffusion coefficient
//   sigma^2 = 2 pi * int sin^2(x) f(A cos x) dx.
struct BumpSolution {
  FiringFunction f;
  double amplitude = 0.0;
  double residual = 0.0;
  double i1 = 0.0;
  double gamma = 0.0;
  double sigma = 0.0;
};

// G(a) = int_S cos(y) f(a cos y) dy; fixed points G(A) = A are the bump
// amplitudes. Closed form for Heaviside, quadrature for the sigmoid.
double amplitude_map(const FiringFunction& f, double a);

// Quadrature resolution that resolves the f'(A cos) boundary layer for small
// kappa; never below 512.
int quad_points_for(const FiringFunction& f);

// All sign-change roots of G(a) - a found by the bracketing scan over
// (|rho| + 1e-6, 4], each bisected to machine width. Ordered increasing.
std::vector<double> amplitude_roots(const FiringFunction& f);

// Solve G(A) = A on the requested branch and populate the derived constants.
// Throws NoFixedPoint when the scan finds no sign change (kappa too large).
BumpSolution solve_amplitude(const FiringFunction& f,
                             Branch branch = Branch::Largest);

// gamma = i1 - 2; throws UnstableBranch when outside (-1, 0).
double spectral_gap(const BumpSolution& sol);

double diffusion_sigma(const BumpSolution& sol);

// the underlying integrals at a given amplitude (closed form for Heaviside)
double bump_i1(const FiringFunction& f, double amplitude);
double bump_sigma(const FiringFunction& f, double amplitude);

// int_S r(y) f'(A cos y) dy for r given on the adaptive quadrature grid;
// used for the identity checks I(sin^2) = 1, I(sin cos) = 0, I(cos^2) = I(1)-1.
struct WeightMoments {
  double one = 0.0;      // I(1)
  double sin2 = 0.0;     // I(sin^2)
  double cos2 = 0.0;     // I(cos^2)
  double sincos = 0.0;   // I(sin cos)
};
WeightMoments weight_moments(const BumpSolution& sol);

}  // namespace ringbumps
