#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ringbumps/field_ops.hpp"
#include "ringbumps/rng.hpp"

using namespace ringbumps;

namespace {

BumpSolution bump05() {
  static BumpSolution sol =
      solve_amplitude(FiringFunction::sigmoid(0.05, 0.5), Branch::Largest);
  return sol;
}

Eigen::ArrayXd smooth_random(const QuadGrid& g, Rng& rng, int max_mode = 5) {
  Eigen::ArrayXd f = Eigen::ArrayXd::Zero(g.m);
  for (int k = 0; k <= max_mode; ++k)
    f += (2.0 * rng.uniform() - 1.0) * (k * g.x).cos() +
         (2.0 * rng.uniform() - 1.0) * (k * g.x).sin();
  return f;
}

// direct double sum over the kernel, independent of the rank-2 path
Eigen::ArrayXd dense_T(const PhaseFrame& fr, const Eigen::ArrayXd& psi) {
  const int m = fr.grid.m;
  Eigen::ArrayXd out(m);
  for (int i = 0; i < m; ++i) {
    double acc = 0.0;
    for (int j = 0; j < m; ++j)
      acc += std::cos(fr.grid.x[i] - fr.grid.x[j]) * fr.weight[j] * psi[j];
    out[i] = acc * fr.grid.weight();
  }
  return out;
}

}  // namespace

TEST_CASE("phase frame geometry") {
  BumpSolution sol = bump05();
  double A = sol.amplitude;
  for (double phi : {0.0, 1.1, -2.5}) {
    PhaseFrame fr = PhaseFrame::make(sol, phi);
    CHECK(std::abs(weighted_inner(fr, fr.u, fr.v)) < 1e-10);
    CHECK(fr.nv2 == doctest::Approx(A * A).epsilon(1e-8));
    CHECK(fr.nu2 == doctest::Approx(A * A * (sol.i1 - 1.0)).epsilon(1e-8));
  }
  SUBCASE("heaviside bumps have no weighted frame") {
    BumpSolution h = solve_amplitude(FiringFunction::heaviside(0.5));
    CHECK_THROWS_AS(PhaseFrame::make(h, 0.0), UnsupportedDerivative);
  }
}

TEST_CASE("rank-2 operator application") {
  BumpSolution sol = bump05();
  PhaseFrame fr = PhaseFrame::make(sol, 0.3);
  double A = sol.amplitude, gam = sol.gamma;

  SUBCASE("tangent direction is fixed by T") {
    Eigen::ArrayXd tv = apply_T(fr, fr.v);
    CHECK(((tv - fr.v).abs().maxCoeff()) < 1e-8);
  }
  SUBCASE("bump direction is scaled by gamma + 1") {
    Eigen::ArrayXd tu = apply_T(fr, fr.u);
    CHECK(((tu - (gam + 1.0) * fr.u).abs().maxCoeff()) < 1e-8);
  }
  SUBCASE("rank-2 path equals the dense kernel oracle") {
    Rng rng(7);
    for (int rep = 0; rep < 3; ++rep) {
      Eigen::ArrayXd psi = smooth_random(fr.grid, rng);
      Eigen::ArrayXd fast = apply_T(fr, psi);
      Eigen::ArrayXd slow = dense_T(fr, psi);
      CHECK((fast - slow).abs().maxCoeff() < 1e-10);
    }
  }
  SUBCASE("output is a degree-1 trigonometric polynomial") {
    Rng rng(8);
    Eigen::ArrayXd psi = smooth_random(fr.grid, rng);
    Eigen::ArrayXd t = apply_T(fr, psi);
    // projection onto modes 0 and 2 vanishes
    CHECK(std::abs(quad_integrate(fr.grid, t)) < 1e-10);
    CHECK(std::abs(quad_integrate(fr.grid, t * (2.0 * fr.grid.x).cos())) < 1e-10);
    CHECK(std::abs(quad_integrate(fr.grid, t * (2.0 * fr.grid.x).sin())) < 1e-10);
  }
  SUBCASE("the mode-2 field is coupled to the bump direction, not killed") {
    // int cos(y) f'(A cos y) cos(2y) dy is nonzero: in the Heaviside limit it
    // is 2 cos(xc) cos(2xc) / (A sin xc) with A cos(xc) = rho
    Eigen::ArrayXd psi = (2.0 * (fr.grid.x + fr.phi)).cos();
    Eigen::ArrayXd t = apply_T(fr, psi);
    double xc = std::acos(0.5 / heaviside_fixed_points(0.5).upper);
    double a0_limit = 2.0 * std::cos(xc) * std::cos(2.0 * xc) /
                      (heaviside_fixed_points(0.5).upper * std::sin(xc));
    double a0 = weighted_inner(fr, psi, (fr.grid.x + fr.phi).cos());
    CHECK(a0 == doctest::Approx(a0_limit).epsilon(0.1));
    CHECK(t.abs().maxCoeff() > 0.1);  // genuinely nonzero
    CHECK((t - dense_T(fr, psi)).abs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("linearized operator L") {
  BumpSolution sol = bump05();
  PhaseFrame fr = PhaseFrame::make(sol, -0.7);
  double gam = sol.gamma;

  SUBCASE("kernel, gamma eigenspace, and the -1 bulk") {
    CHECK(apply_L(fr, fr.v).abs().maxCoeff() < 1e-8);
    CHECK((apply_L(fr, fr.u) - gam * fr.u).abs().maxCoeff() < 1e-8);
    // a field with no mode-1 weighted content restores -psi
    Eigen::ArrayXd psi = (2.0 * fr.grid.x).cos();
    Projection p = project(fr, psi);
    double cg = weighted_inner(fr, psi, fr.u) / fr.nu2;
    Eigen::ArrayXd bulk = p.perp - cg * fr.u;
    CHECK((apply_L(fr, bulk) + bulk).abs().maxCoeff() < 1e-8);
  }
  SUBCASE("self-adjoint in the weighted inner product") {
    Rng rng(9);
    for (int rep = 0; rep < 5; ++rep) {
      Eigen::ArrayXd g1 = smooth_random(fr.grid, rng);
      Eigen::ArrayXd g2 = smooth_random(fr.grid, rng);
      double lhs = weighted_inner(fr, apply_L(fr, g1), g2);
      double rhs = weighted_inner(fr, g1, apply_L(fr, g2));
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
    }
  }
}

TEST_CASE("projections") {
  BumpSolution sol = bump05();
  PhaseFrame fr = PhaseFrame::make(sol, 0.0);
  double A = sol.amplitude;

  SUBCASE("projection onto the tangent span is idempotent") {
    Projection p = project(fr, fr.v);
    CHECK((p.circ - fr.v).abs().maxCoeff() < 1e-8);
    CHECK(p.perp.abs().maxCoeff() < 1e-8);
    // the exposed scalar follows the single-norm convention: alpha(v) = ||v||
    CHECK(p.alpha_circ == doctest::Approx(A).epsilon(1e-8));
  }
  SUBCASE("bump direction is orthogonal to the tangent") {
    Projection p = project(fr, fr.u);
    CHECK(p.circ.abs().maxCoeff() < 1e-8);
    CHECK(p.alpha_gamma ==
          doctest::Approx(A * std::sqrt(sol.i1 - 1.0)).epsilon(1e-7));
  }
  SUBCASE("circ + perp reassembles any field") {
    Rng rng(10);
    Eigen::ArrayXd g = smooth_random(fr.grid, rng);
    Projection p = project(fr, g);
    CHECK((p.circ + p.perp - g).abs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("spectral semigroup") {
  BumpSolution sol = bump05();
  PhaseFrame fr = PhaseFrame::make(sol, 0.4);
  double gam = sol.gamma;
  Rng rng(12);

  SUBCASE("identity at time zero") {
    Eigen::ArrayXd g = smooth_random(fr.grid, rng);
    CHECK((semigroup_apply(fr, 0.0, g) - g).abs().maxCoeff() < 1e-12);
  }
  SUBCASE("kernel invariance and gamma decay") {
    CHECK((semigroup_apply(fr, 3.7, fr.v) - fr.v).abs().maxCoeff() < 1e-10);
    Eigen::ArrayXd eu = semigroup_apply(fr, 1.0, fr.u);
    CHECK((eu - std::exp(gam) * fr.u).abs().maxCoeff() < 1e-8);
  }
  SUBCASE("negative time is rejected") {
    CHECK_THROWS_AS(semigroup_apply(fr, -0.1, fr.u), InvalidTime);
  }
  SUBCASE("contraction of the complement at rate gamma") {
    for (int rep = 0; rep < 50; ++rep) {
      Eigen::ArrayXd g = smooth_random(fr.grid, rng);
      Eigen::ArrayXd pperp = project(fr, g).perp;
      double n0 = std::sqrt(weighted_inner(fr, pperp, pperp));
      for (double t : {0.5, 1.0, 2.0}) {
        Eigen::ArrayXd et = semigroup_apply(fr, t, pperp);
        double nt = std::sqrt(weighted_inner(fr, et, et));
        CHECK(nt <= std::exp(gam * t) * n0 * (1.0 + 1e-8));
      }
    }
  }
}

TEST_CASE("discretized eigenproblem") {
  BumpSolution sol = bump05();
  PhaseFrame fr = PhaseFrame::make(sol, 0.0, 512);
  SpectrumReport rep = spectrum(fr);

  CHECK(rep.count_minus_one == 510);
  CHECK(rep.count_gamma == 1);
  CHECK(rep.count_zero == 1);
  CHECK(std::abs(rep.kernel_eig) < 1e-6);
  CHECK(std::abs(rep.gamma_eig - (sol.i1 - 2.0)) < 1e-6);
  CHECK(rep.kernel_cosine_sim > 0.999);
}

TEST_CASE("phase equivariance") {
  BumpSolution sol = bump05();
  QuadGrid g = QuadGrid::make(512);
  PhaseFrame f0 = PhaseFrame::make(sol, 0.0);

  // rotate by a whole number of cells so fields permute exactly
  int shift = 64;
  double dphi = shift * g.weight();
  PhaseFrame f1 = PhaseFrame::make(sol, dphi);

  CHECK(f1.nv2 == doctest::Approx(f0.nv2).epsilon(1e-10));
  CHECK(f1.nu2 == doctest::Approx(f0.nu2).epsilon(1e-10));

  Rng rng(13);
  Eigen::ArrayXd h = smooth_random(g, rng);
  Eigen::ArrayXd h_rot(g.m);
  for (int k = 0; k < g.m; ++k) h_rot[k] = h[(k + shift) % g.m];

  Projection p0 = project(f0, h);
  Projection p1 = project(f1, h_rot);
  CHECK(p1.alpha_circ == doctest::Approx(p0.alpha_circ).epsilon(1e-10));
  CHECK(p1.alpha_gamma == doctest::Approx(p0.alpha_gamma).epsilon(1e-10));

  SpectrumReport r0 = spectrum(f0);
  SpectrumReport r1 = spectrum(f1);
  CHECK(r1.gamma_eig == doctest::Approx(r0.gamma_eig).epsilon(1e-10));
}
