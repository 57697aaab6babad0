#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <doctest.h>

#include "mcom/dynamics.hpp"
#include "mcom/errors.hpp"
#include "support.hpp"

using namespace mcom;

namespace {

using CMatrix8 = Eigen::Matrix<std::complex<double>, 8, 8>;
constexpr std::complex<double> kI{0.0, 1.0};

// Drift reconstructed from the linearized operator equations on
// (da, da+, dc, dc+, dB1, dB1+, dB2, dB2+), rotated into quadratures with
// x = (o + o+)/sqrt2 and y = (o - o+)/(i sqrt2).
Matrix8 derived_drift(const SteadyState& ss, const SystemParams& p) {
  CMatrix8 m = CMatrix8::Zero();
  const double G1 = ss.g_cap_1, G2 = ss.g_cap_2;
  m(0, 0) = -(kI * p.delta_a + p.kappa_a);
  m(0, 1) = 2.0 * p.lambda_opa * std::exp(kI * p.theta);
  m(0, 2) = -kI * p.j_1;
  m(2, 2) = -(kI * ss.delta_c_eff + p.kappa_c);
  m(2, 4) = m(2, 5) = kI * G1;
  m(2, 6) = m(2, 7) = kI * G2;
  m(2, 0) = -kI * p.j_2;
  m(4, 4) = -(kI + p.gamma_1);
  m(4, 2) = m(4, 3) = kI * G1;
  m(6, 6) = -(kI + p.gamma_2);
  m(6, 2) = m(6, 3) = kI * G2;
  // Hermitian-conjugate equations.
  for (int r = 0; r < 8; r += 2)
    for (int c = 0; c < 8; ++c) m(r + 1, c ^ 1) = std::conj(m(r, c));

  CMatrix8 t = CMatrix8::Zero();
  const double s = 1.0 / std::sqrt(2.0);
  for (int k = 0; k < 4; ++k) {
    t(2 * k, 2 * k) = s;
    t(2 * k, 2 * k + 1) = s;
    t(2 * k + 1, 2 * k) = -kI * s;
    t(2 * k + 1, 2 * k + 1) = kI * s;
  }
  const CMatrix8 a = t * m * t.inverse();
  CHECK(a.imag().cwiseAbs().maxCoeff() <= 1e-13);
  return a.real();
}

SteadyState random_state(test::Gen& g, const SystemParams& p) {
  SteadyState ss;
  ss.delta_c_eff = p.delta_c;
  ss.g_cap_1 = g.uniform(0.0, 0.5);
  ss.g_cap_2 = g.uniform(0.0, 0.5);
  return ss;
}

// Characteristic polynomial coefficients c_0 = 1, c_1, ..., c_8 of
// det(sI - A) by the Faddeev-LeVerrier recursion.
std::vector<long double> characteristic_polynomial(const Matrix8& a) {
  using LMatrix = Eigen::Matrix<long double, 8, 8>;
  const LMatrix al = a.cast<long double>();
  std::vector<long double> c(9, 0.0L);
  c[0] = 1.0L;
  LMatrix m = LMatrix::Zero();
  for (int k = 1; k <= 8; ++k) {
    m = al * m + c[k - 1] * LMatrix::Identity();
    c[k] = -(al * m).trace() / k;
  }
  return c;
}

// Routh array first column; all positive iff every root lies in the open
// left half plane.
bool routh_hurwitz_stable(const std::vector<long double>& c) {
  const int n = static_cast<int>(c.size()) - 1;
  std::vector<std::vector<long double>> rows(n + 1);
  for (int i = 0; i <= n; i += 2) rows[0].push_back(c[i]);
  for (int i = 1; i <= n; i += 2) rows[1].push_back(c[i]);
  const std::size_t width = rows[0].size();
  for (auto& r : rows) r.resize(width, 0.0L);
  for (int r = 2; r <= n; ++r) {
    if (rows[r - 1][0] == 0.0L) return false;
    for (std::size_t j = 0; j + 1 < width; ++j)
      rows[r][j] = (rows[r - 1][0] * rows[r - 2][j + 1] - rows[r - 2][0] * rows[r - 1][j + 1]) / rows[r - 1][0];
  }
  for (int r = 0; r <= n; ++r)
    if (!(rows[r][0] > 0.0L)) return false;
  return true;
}

}  // namespace

TEST_CASE("drift entries at theta = pi/2") {
  SystemParams p;
  p.theta = std::numbers::pi / 2;
  const auto ss = solve_mean_field(p);
  const auto a = build_drift(ss, p).a;
  CHECK(a(0, 0) == doctest::Approx(-p.kappa_a).epsilon(1e-15));
  CHECK(a(0, 1) == doctest::Approx(2.0 * p.lambda_opa + p.delta_a).epsilon(1e-15));
  CHECK(a(1, 0) == doctest::Approx(2.0 * p.lambda_opa - p.delta_a).epsilon(1e-15));
  CHECK(a(3, 4) == 2.0 * ss.g_cap_1);
  CHECK(a(5, 2) == 2.0 * ss.g_cap_1);
  CHECK(a(7, 2) == 2.0 * ss.g_cap_2);
  CHECK(a(2, 3) == ss.delta_c_eff);
}

TEST_CASE("decoupled limit is block diagonal with damped-oscillator eigenvalues") {
  SystemParams p;
  p.lambda_opa = 0.0;
  p.j_1 = p.j_2 = 0.0;
  p.gamma_1 = 2e-4;
  SteadyState ss;
  ss.delta_c_eff = 0.7;
  const auto a = build_drift(ss, p).a;
  Matrix8 expected = Matrix8::Zero();
  auto block = [&](int k, double damping, double freq) {
    expected(2 * k, 2 * k) = expected(2 * k + 1, 2 * k + 1) = -damping;
    expected(2 * k, 2 * k + 1) = freq;
    expected(2 * k + 1, 2 * k) = -freq;
  };
  block(0, p.kappa_a, p.delta_a);
  block(1, p.kappa_c, 0.7);
  block(2, p.gamma_1, 1.0);
  block(3, p.gamma_2, 1.0);
  CHECK(a == expected);

  const auto rep = stability({a});
  CHECK(rep.stable);
  CHECK(rep.max_real_part == doctest::Approx(-p.gamma_2).epsilon(1e-12));
  std::vector<std::complex<double>> want = {{-p.kappa_a, p.delta_a}, {-p.kappa_a, -p.delta_a}, {-p.kappa_c, 0.7},
                                            {-p.kappa_c, -0.7},      {-p.gamma_1, 1.0},        {-p.gamma_1, -1.0},
                                            {-p.gamma_2, 1.0},       {-p.gamma_2, -1.0}};
  for (const auto& w : want) {
    const bool found = std::any_of(rep.eigenvalues.begin(), rep.eigenvalues.end(),
                                   [&](auto e) { return std::abs(e - w) <= 1e-12; });
    CHECK(found);
  }
}

TEST_CASE("drift matches the quadrature rewrite of the linearized equations") {
  const SystemParams p;
  const auto ss = solve_mean_field(p);
  CHECK((build_drift(ss, p).a - derived_drift(ss, p)).cwiseAbs().maxCoeff() <= 1e-14);

  test::Gen g(31);
  for (int i = 0; i < 100; ++i) {
    const SystemParams q = g.params();
    const auto s = random_state(g, q);
    CHECK((build_drift(s, q).a - derived_drift(s, q)).cwiseAbs().maxCoeff() <= 1e-13);
  }
}

TEST_CASE("trace identity") {
  test::Gen g(32);
  auto dyadic = [&](double lo, double hi) { return std::round(g.uniform(lo, hi) * 1024.0) / 1024.0; };
  for (int i = 0; i < 200; ++i) {
    SystemParams p = g.params();
    const auto ss = random_state(g, p);
    const double expected = -2.0 * (p.kappa_a + p.kappa_c + p.gamma_1 + p.gamma_2);
    CHECK(build_drift(ss, p).a.trace() == doctest::Approx(expected).epsilon(1e-15));

    // Representable inputs make every partial sum exact, so the OPA terms
    // cancel bit for bit.
    p.kappa_a = dyadic(0.1, 0.6);
    p.kappa_c = dyadic(0.1, 0.6);
    p.gamma_1 = dyadic(0.01, 0.1);
    p.gamma_2 = dyadic(0.01, 0.1);
    p.lambda_opa = dyadic(0.0, 0.5);
    p.theta = g.coin() ? 0.0 : std::numbers::pi;
    CHECK(build_drift(ss, p).a.trace() == -2.0 * (p.kappa_a + p.kappa_c + p.gamma_1 + p.gamma_2));
  }
}

TEST_CASE("relabeling the collective modes permutes the drift matrix") {
  Eigen::PermutationMatrix<8> perm;
  perm.indices() << 0, 1, 2, 3, 6, 7, 4, 5;
  test::Gen g(33);
  for (int i = 0; i < 100; ++i) {
    const SystemParams p = g.params();
    const auto ss = random_state(g, p);
    SystemParams q = p;
    std::swap(q.gamma_1, q.gamma_2);
    SteadyState st = ss;
    std::swap(st.g_cap_1, st.g_cap_2);
    const Matrix8 a = build_drift(ss, p).a;
    const Matrix8 b = build_drift(st, q).a;
    CHECK(Matrix8(perm * a * perm.transpose()) == b);
  }
}

TEST_CASE("stability verdict agrees with the Routh-Hurwitz criterion") {
  test::Gen g(34);
  int stable = 0, unstable = 0;
  for (int i = 0; i < 100; ++i) {
    SystemParams p = g.params();
    p.lambda_opa = g.uniform(0.0, 0.8);
    const auto ss = random_state(g, p);
    const auto a = build_drift(ss, p);
    const auto rep = stability(a);
    const bool rh = routh_hurwitz_stable(characteristic_polynomial(a.a));
    CHECK(rh == rep.stable);
    (rep.stable ? stable : unstable)++;
  }
  CHECK(stable >= 10);
  CHECK(unstable >= 10);
}

TEST_CASE("stability at the published operating points") {
  SystemParams p;
  p.lambda_opa = 0.2;
  CHECK(stability(build_drift(solve_mean_field(p), p)).stable);
  p.lambda_opa = 0.5;
  const auto rep = stability(build_drift(solve_mean_field(p), p));
  CHECK_FALSE(rep.stable);
  CHECK(rep.max_real_part > 0.0);
}

TEST_CASE("marginal and pathological drift matrices") {
  Matrix8 a = -1e-13 * Matrix8::Identity();
  CHECK_FALSE(stability({a}).stable);
  a(0, 0) = std::nan("");
  CHECK_THROWS_AS(stability({a}), EigenvalueFailure);
}

TEST_CASE("eigenvalues are reported in descending real part") {
  const SystemParams p;
  const auto rep = stability(build_drift(solve_mean_field(p), p));
  CHECK(rep.eigenvalues[0].real() == rep.max_real_part);
  for (int i = 1; i < 8; ++i) CHECK(rep.eigenvalues[i - 1].real() >= rep.eigenvalues[i].real());
}

TEST_CASE("diffusion matrix") {
  SystemParams p;
  p.kappa_a = p.kappa_c = 0.3;
  p.gamma_1 = p.gamma_2 = 1e-4;
  const auto d0 = build_diffusion(p, 0.0).d;
  Eigen::Matrix<double, 8, 1> want;
  want << 0.3, 0.3, 0.3, 0.3, 1e-4, 1e-4, 1e-4, 1e-4;
  CHECK(Matrix8(want.asDiagonal()) == d0);

  const auto dh = build_diffusion(p, 0.5).d;
  for (int k = 4; k < 8; ++k) CHECK(dh(k, k) == 2e-4);

  const SystemParams defaults;
  const auto dd = build_diffusion(defaults, derive(defaults).n_th).d;
  CHECK(dd(4, 4) == doctest::Approx(1.0002e-4).epsilon(1e-5));
  CHECK(dd(7, 7) == dd(4, 4));
  CHECK((dd - Matrix8(dd.diagonal().asDiagonal())).cwiseAbs().maxCoeff() == 0.0);
}
