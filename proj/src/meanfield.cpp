#include "mcom/meanfield.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include <Eigen/Dense>
#include <boost/numeric/odeint.hpp>
#include <fmt/format.h>

#include "mcom/errors.hpp"

namespace mcom {

namespace {

constexpr cplx kI{0.0, 1.0};

struct CavityAmplitudes {
  cplx a;
  cplx c;
};

// Sign of the radiation-pressure term in the vibrational steady state.
double beta_sign(OpaCoupling opa) { return opa == OpaCoupling::Paper ? -1.0 : 1.0; }

cplx vibrational_amplitude(double g, double gamma, double photons, OpaCoupling opa) {
  return beta_sign(opa) * kI * g * photons / (kI + gamma);
}

// Detuning shift 2 sum_k g_k Re[beta_k].
double detuning_shift(double g1, double g2, cplx b1, cplx b2) {
  return 2.0 * (g1 * b1.real() + g2 * b2.real());
}

// Cavity amplitudes for a fixed cavity-2 detuning; the equations are linear
// once the detuning is known.
CavityAmplitudes solve_cavities(const SystemParams& p, double delta_eff, OpaCoupling opa) {
  const cplx opa_gain = 2.0 * p.lambda_opa * std::exp(kI * p.theta);
  if (opa == OpaCoupling::Paper) {
    const cplx m11 = (kI * p.delta_a + p.kappa_a) - opa_gain;
    const cplx m12 = kI * p.j_1;
    const cplx m21 = kI * p.j_2;
    const cplx m22 = kI * delta_eff + p.kappa_c;
    const cplx det = m11 * m22 - m12 * m21;
    if (std::abs(det) < 1e-300) throw SingularSolve("mean-field cavity system is singular");
    return {(p.drive_a * m22 - m12 * p.drive_c) / det, (m11 * p.drive_c - m21 * p.drive_a) / det};
  }

  // Real unknowns (Re a, Im a, Re c, Im c). Each column is the residual
  // contribution of one unit unknown.
  auto homogeneous = [&](const Eigen::Vector4d& z) {
    const cplx a{z(0), z(1)};
    const cplx c{z(2), z(3)};
    const cplx fa = -(kI * p.delta_a + p.kappa_a) * a - kI * p.j_1 * c + opa_gain * std::conj(a);
    const cplx fc = -(kI * delta_eff + p.kappa_c) * c - kI * p.j_2 * a;
    return Eigen::Vector4d(fa.real(), fa.imag(), fc.real(), fc.imag());
  };
  Eigen::Matrix4d m;
  for (int k = 0; k < 4; ++k) m.col(k) = homogeneous(Eigen::Vector4d::Unit(k));
  const Eigen::Vector4d rhs(-p.drive_a, 0.0, -p.drive_c, 0.0);
  Eigen::FullPivLU<Eigen::Matrix4d> lu(m);
  if (!lu.isInvertible()) throw SingularSolve("mean-field cavity system is singular");
  const Eigen::Vector4d z = lu.solve(rhs);
  return {{z(0), z(1)}, {z(2), z(3)}};
}

SteadyState assemble(const SystemParams& p, const CavityAmplitudes& cav, double delta_eff,
                     OpaCoupling opa, int iterations) {
  const auto [g1, g2] = collective_couplings(p);
  SteadyState ss;
  ss.alpha_a = cav.a;
  ss.alpha_c = cav.c;
  const double photons = std::norm(cav.c);
  ss.beta_1 = vibrational_amplitude(g1, p.gamma_1, photons, opa);
  ss.beta_2 = vibrational_amplitude(g2, p.gamma_2, photons, opa);
  ss.delta_c_eff = delta_eff;
  ss.delta_c_bare = delta_eff + detuning_shift(g1, g2, ss.beta_1, ss.beta_2);
  ss.g_cap_1 = g1 * std::abs(cav.c);
  ss.g_cap_2 = g2 * std::abs(cav.c);
  ss.iterations = iterations;
  return ss;
}

}  // namespace

OpaCoupling parse_opa_coupling(std::string_view s) {
  if (s == "paper") return OpaCoupling::Paper;
  if (s == "exact") return OpaCoupling::Exact;
  throw ConfigError(fmt::format("unknown mean-field mode '{}' (expected paper|exact)", s));
}

DetuningInput parse_detuning_input(std::string_view s) {
  if (s == "effective") return DetuningInput::Effective;
  if (s == "bare") return DetuningInput::Bare;
  throw ConfigError(fmt::format("unknown detuning input '{}' (expected effective|bare)", s));
}

std::string_view to_string(OpaCoupling m) { return m == OpaCoupling::Paper ? "paper" : "exact"; }

std::string_view to_string(DetuningInput d) {
  return d == DetuningInput::Effective ? "effective" : "bare";
}

double steady_state_residual(const SystemParams& p, const SteadyState& ss, OpaCoupling opa) {
  const auto [g1, g2] = collective_couplings(p);
  const cplx opa_gain = 2.0 * p.lambda_opa * std::exp(kI * p.theta);
  const cplx a = ss.alpha_a;
  const cplx c = ss.alpha_c;

  const cplx opa_partner = opa == OpaCoupling::Paper ? a : std::conj(a);
  const cplx ra = -(kI * p.delta_a + p.kappa_a) * a - kI * p.j_1 * c + opa_gain * opa_partner + p.drive_a;
  const double sa = std::max(1.0, std::abs(p.drive_a) + std::abs(p.j_1 * c) +
                                      std::abs((kI * p.delta_a + p.kappa_a) * a));

  const double delta_eff = ss.delta_c_bare - detuning_shift(g1, g2, ss.beta_1, ss.beta_2);
  const cplx rc = -(kI * delta_eff + p.kappa_c) * c - kI * p.j_2 * a + p.drive_c;
  const double sc = std::max(1.0, std::abs(p.drive_c) + std::abs(p.j_2 * a) +
                                      std::abs((kI * delta_eff + p.kappa_c) * c));

  const double photons = std::norm(c);
  const double s = beta_sign(opa);
  const cplx rb1 = ss.beta_1 * (kI + p.gamma_1) - s * kI * g1 * photons;
  const cplx rb2 = ss.beta_2 * (kI + p.gamma_2) - s * kI * g2 * photons;
  const double sb = std::max(1.0, std::max(g1, g2) * photons);

  const double rd = std::abs(delta_eff - ss.delta_c_eff) / std::max(1.0, std::abs(ss.delta_c_eff));

  return std::max({std::abs(ra) / sa, std::abs(rc) / sc, std::abs(rb1) / sb, std::abs(rb2) / sb, rd});
}

SteadyState solve_mean_field(const SystemParams& params, const MeanFieldOptions& options) {
  const SystemParams p = validate(params);

  if (options.detuning == DetuningInput::Effective) {
    const auto cav = solve_cavities(p, p.delta_c, options.opa);
    SteadyState ss = assemble(p, cav, p.delta_c, options.opa, 0);
    ss.residual = steady_state_residual(p, ss, options.opa);
    return ss;
  }

  const auto [g1, g2] = collective_couplings(p);
  const double d = options.damping;
  double photons = 0.0;
  double prev_step = 0.0;
  double prev_prev_step = 0.0;
  double residual = 0.0;

  for (int it = 1; it <= options.max_iterations; ++it) {
    const cplx b1 = vibrational_amplitude(g1, p.gamma_1, photons, options.opa);
    const cplx b2 = vibrational_amplitude(g2, p.gamma_2, photons, options.opa);
    const double delta_eff = p.delta_c - detuning_shift(g1, g2, b1, b2);
    const auto cav = solve_cavities(p, delta_eff, options.opa);
    const double mapped = std::norm(cav.c);
    const double step = mapped - photons;
    residual = std::abs(step) / std::max(1.0, mapped);

    if (!std::isfinite(mapped))
      throw NonConvergence("mean-field iteration produced a non-finite amplitude", residual, it);

    if (residual <= 1e-2 * options.tolerance) {
      // Rebuild from the converged photon number so the vibrational relation
      // holds exactly and the cavity relations carry the remaining error.
      const double shift = detuning_shift(
          g1, g2, vibrational_amplitude(g1, p.gamma_1, mapped, options.opa),
          vibrational_amplitude(g2, p.gamma_2, mapped, options.opa));
      const double final_delta = p.delta_c - shift;
      const auto final_cav = solve_cavities(p, final_delta, options.opa);
      SteadyState ss = assemble(p, final_cav, final_delta, options.opa, it);
      ss.delta_c_bare = p.delta_c;
      ss.delta_c_eff = p.delta_c - detuning_shift(g1, g2, ss.beta_1, ss.beta_2);
      ss.residual = steady_state_residual(p, ss, options.opa);
      if (ss.residual > options.tolerance)
        throw NonConvergence(
            fmt::format("mean-field residual {:.3e} above tolerance after convergence", ss.residual),
            ss.residual, it);
      return ss;
    }

    // Period-2 cycle: successive steps flip sign without shrinking.
    if (it > 50 && prev_step != 0.0 && step * prev_step < 0.0 && prev_prev_step * prev_step < 0.0 &&
        std::abs(step) > 0.999 * std::abs(prev_prev_step)) {
      throw NonConvergence(
          fmt::format("mean-field iteration is oscillating between two branches "
                      "(possible multistability), residual {:.3e}",
                      residual),
          residual, it);
    }

    prev_prev_step = prev_step;
    prev_step = step;
    photons = (1.0 - d) * photons + d * mapped;
  }
  throw NonConvergence(
      fmt::format("mean-field iteration did not converge in {} iterations, residual {:.3e}",
                  options.max_iterations, residual),
      residual, options.max_iterations);
}

SteadyState integrate_classical(const SystemParams& params, double t_end, double dt) {
  namespace odeint = boost::numeric::odeint;
  const SystemParams p = validate(params);
  if (!(dt > 0.0) || dt > 0.01) throw ConfigError("integration step must lie in (0, 0.01]");
  if (!(t_end > 0.0)) throw ConfigError("integration horizon must be positive");

  const auto [g1, g2] = collective_couplings(p);
  const cplx opa_gain = 2.0 * p.lambda_opa * std::exp(kI * p.theta);
  const double s = beta_sign(OpaCoupling::Exact);

  using State = std::array<double, 8>;
  auto rhs = [&](const State& x, State& dxdt, double /*t*/) {
    const cplx a{x[0], x[1]}, c{x[2], x[3]}, b1{x[4], x[5]}, b2{x[6], x[7]};
    const cplx da = -(kI * p.delta_a + p.kappa_a) * a - kI * p.j_1 * c + opa_gain * std::conj(a) + p.drive_a;
    const cplx dc = -(kI * p.delta_c + p.kappa_c) * c +
                    kI * c * (g1 * 2.0 * b1.real() + g2 * 2.0 * b2.real()) - kI * p.j_2 * a + p.drive_c;
    const double photons = std::norm(c);
    const cplx db1 = -(kI + p.gamma_1) * b1 + s * kI * g1 * photons;
    const cplx db2 = -(kI + p.gamma_2) * b2 + s * kI * g2 * photons;
    dxdt = {da.real(), da.imag(), dc.real(), dc.imag(), db1.real(), db1.imag(), db2.real(), db2.imag()};
  };
  auto norm = [](const State& v) {
    double acc = 0.0;
    for (double e : v) acc += e * e;
    return std::sqrt(acc);
  };

  auto stepper = odeint::make_controlled(1e-13, 1e-13, odeint::runge_kutta_dopri5<State>());
  State x{};
  State dxdt{};
  double t = 0.0;
  double h = dt;
  constexpr double kChunk = 50.0;
  constexpr double kOverflow = 1e10;

  while (t < t_end) {
    const double t_stop = std::min(t_end, t + kChunk);
    while (t < t_stop) {
      h = std::min(h, t_stop - t);
      if (stepper.try_step(rhs, x, t, h) == odeint::fail) continue;
      if (!(norm(x) < kOverflow)) throw Diverged(fmt::format("classical amplitudes diverged at t = {:.6g}", t));
    }
    rhs(x, dxdt, t);
    if (norm(dxdt) <= 1e-14 * std::max(1.0, norm(x))) break;
  }

  const CavityAmplitudes cav{{x[0], x[1]}, {x[2], x[3]}};
  SteadyState ss;
  ss.alpha_a = cav.a;
  ss.alpha_c = cav.c;
  ss.beta_1 = {x[4], x[5]};
  ss.beta_2 = {x[6], x[7]};
  ss.delta_c_bare = p.delta_c;
  ss.delta_c_eff = p.delta_c - detuning_shift(g1, g2, ss.beta_1, ss.beta_2);
  ss.g_cap_1 = g1 * std::abs(cav.c);
  ss.g_cap_2 = g2 * std::abs(cav.c);
  ss.residual = steady_state_residual(p, ss, OpaCoupling::Exact);
  return ss;
}

}  // namespace mcom
