#include <cmath>

#include <doctest.h>

#include "mcom/errors.hpp"
#include "mcom/lyapunov.hpp"
#include "support.hpp"

using namespace mcom;

namespace {

struct System {
  DriftMatrix a;
  DiffusionMatrix d;
};

System at(const SystemParams& p) {
  const auto ss = solve_mean_field(p);
  return {build_drift(ss, p), build_diffusion(p, derive(p).n_th)};
}

// Random stable system from the operating-point generator; draws that are
// unstable are rejected.
System random_stable(test::Gen& g, bool reciprocal) {
  for (;;) {
    SystemParams p = g.params();
    p.gamma_1 = g.log_uniform(1e-3, 5e-2);
    p.gamma_2 = g.log_uniform(1e-3, 5e-2);
    if (reciprocal) p.j_2 = p.j_1;
    const auto s = at(p);
    if (stability(s.a).stable) return s;
  }
}

double max_abs(const Matrix8& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("scalar relaxation") {
  const double kappa = 0.37, c = 2.5;
  const DriftMatrix a{-kappa * Matrix8::Identity()};
  const DiffusionMatrix d{2.0 * kappa * c * Matrix8::Identity()};
  CHECK(max_abs(solve_lyapunov(a, d).v - c * Matrix8::Identity()) <= 1e-13);

  for (double t : {0.5, 1.0, 3.0}) {
    const auto end = integrate_covariance(a, d, Matrix8::Zero(), t, 0.01);
    CHECK(end.t == doctest::Approx(t).epsilon(1e-12));
    CHECK(max_abs(end.v.v - c * (1.0 - std::exp(-2.0 * kappa * t)) * Matrix8::Identity()) <= 1e-12);
  }
  const auto end = integrate_covariance(a, d, Matrix8::Zero(), 1e4, 0.01);
  CHECK(end.converged);
  CHECK(max_abs(end.v.v - c * Matrix8::Identity()) <= 1e-12);
}

TEST_CASE("vacuum") {
  SystemParams p;
  p.drive_a = p.drive_c = 0.0;
  p.j_1 = p.j_2 = 0.0;
  p.lambda_opa = 0.0;
  p.temperature = 0.0;
  const auto s = at(p);
  const Matrix8 half = 0.5 * Matrix8::Identity();
  CHECK(max_abs(solve_lyapunov(s.a, s.d).v - half) <= 1e-14);

  const auto end = integrate_covariance(s.a, s.d, half, 100.0, 0.01);
  CHECK(end.converged);
  CHECK(end.t == 0.0);
  CHECK(max_abs(end.v.v - half) <= 1e-14);
}

TEST_CASE("defaults: Lyapunov solution is the long-time limit of the covariance flow") {
  const auto s = at(SystemParams{});
  const auto v = solve_lyapunov(s.a, s.d);
  const auto end = integrate_covariance(s.a, s.d, 0.5 * Matrix8::Identity(), 1e7, 0.01);
  CHECK(end.converged);
  CHECK(max_abs(end.v.v - v.v) <= 1e-6);
}

TEST_CASE("residual bound and symmetry on random stable systems") {
  test::Gen g(41);
  for (int i = 0; i < 100; ++i) {
    const auto s = random_stable(g, g.coin());
    const auto v = solve_lyapunov(s.a, s.d);
    CHECK(lyapunov_residual(s.a, s.d, v) <= 1e-10 * s.d.d.norm());
    CHECK(v.v == v.v.transpose());
  }
}

TEST_CASE("covariance flow agrees with the Lyapunov solution on random stable systems") {
  test::Gen g(42);
  for (int i = 0; i < 30; ++i) {
    const auto s = random_stable(g, g.coin());
    const auto v = solve_lyapunov(s.a, s.d);
    const auto end = integrate_covariance(s.a, s.d, 0.5 * Matrix8::Identity(), 1e7, 0.01);
    CHECK(max_abs(end.v.v - v.v) <= 1e-6 * std::max(1.0, max_abs(v.v)));
  }
}

TEST_CASE("solution is linear in the diffusion matrix") {
  test::Gen g(43);
  for (int i = 0; i < 50; ++i) {
    const auto s = random_stable(g, g.coin());
    const Eigen::MatrixXd r1 = g.gaussian(8, 8), r2 = g.gaussian(8, 8);
    const DiffusionMatrix d1{r1 * r1.transpose()}, d2{r2 + r2.transpose()};
    const DiffusionMatrix d12{d1.d + d2.d};
    const Matrix8 lhs = solve_lyapunov(s.a, d12).v;
    const Matrix8 rhs = solve_lyapunov(s.a, d1).v + solve_lyapunov(s.a, d2).v;
    CHECK(max_abs(lhs - rhs) <= 1e-10 * std::max(1.0, max_abs(lhs)));
  }
}

TEST_CASE("unstable drift is rejected") {
  SystemParams p;
  p.lambda_opa = 0.5;
  const auto s = at(p);
  try {
    solve_lyapunov(s.a, s.d);
    FAIL("expected UnstableSystem");
  } catch (const UnstableSystem& e) {
    CHECK(e.max_real_part() > 0.0);
    CHECK(std::string(e.what()).starts_with("system unstable (max Re λ = "));
  }
  CHECK_THROWS_AS(integrate_covariance(s.a, s.d, 0.5 * Matrix8::Identity(), 1e6, 0.01), Diverged);
}

TEST_CASE("covariance flow argument validation") {
  const auto s = at(SystemParams{});
  CHECK_THROWS_AS(integrate_covariance(s.a, s.d, Matrix8::Zero(), 1.0, 0.05), ConfigError);
  CHECK_THROWS_AS(integrate_covariance(s.a, s.d, Matrix8::Zero(), -1.0, 0.01), ConfigError);
}

TEST_CASE("uncertainty margin") {
  CHECK(uncertainty_margin({0.5 * Matrix8::Identity()}) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(is_physical({0.5 * Matrix8::Identity()}));
  CHECK_FALSE(is_physical({0.4 * Matrix8::Identity()}));

  test::Gen g(44);
  for (int i = 0; i < 50; ++i) {
    const Eigen::MatrixXd v = test::random_physical_covariance(g, 4);
    CHECK(uncertainty_margin({v}) >= -1e-9);
  }
}

TEST_CASE("reciprocal coupling yields physical states") {
  test::Gen g(45);
  for (int i = 0; i < 100; ++i) {
    const auto s = random_stable(g, true);
    CHECK(is_physical(solve_lyapunov(s.a, s.d)));
  }
}

TEST_CASE("nonreciprocal defaults violate the uncertainty relation") {
  // J_1 != J_2 enters the drift without a compensating noise term, so the
  // stationary covariance is not a valid quantum state.
  const auto s = at(SystemParams{});
  const double margin = uncertainty_margin(solve_lyapunov(s.a, s.d));
  CHECK(margin < -0.1);
}
