#pragma once

// Classical steady state of the driven system around which the quantum
// fluctuations are linearized.

#include <complex>
#include <string_view>

#include "mcom/model.hpp"

namespace mcom {

using cplx = std::complex<double>;

// How the OPA term 2 Lambda e^{i theta} a^dagger enters the mean-field equations.
//   Paper: the conjugate is replaced by the amplitude itself, which gives the
//          closed-form cavity-1 amplitude (E_a - i J_1 alpha_c) / (i D_a + k_a - 2 Lambda e^{i theta}).
//          The vibrational amplitude uses beta_k = -i g_k |alpha_c|^2 / (i + gamma_k).
//   Exact: the genuine mean-field equations; alpha_a and conj(alpha_a) are
//          solved together and beta_k = +i g_k |alpha_c|^2 / (i + gamma_k),
//          as follows from the Heisenberg equations.
enum class OpaCoupling { Paper, Exact };

// Which cavity-2 detuning the parameter set specifies.
//   Effective: params.delta_c is the shifted detuning that enters the
//              fluctuation dynamics. The bare detuning is reconstructed from
//              the solution. This is how the published sweeps are parametrized.
//   Bare:      params.delta_c is the bare detuning; the shifted one is found
//              self-consistently by fixed-point iteration on |alpha_c|^2.
enum class DetuningInput { Effective, Bare };

struct MeanFieldOptions {
  OpaCoupling opa = OpaCoupling::Paper;
  DetuningInput detuning = DetuningInput::Effective;
  double damping = 0.5;
  double tolerance = 1e-10;
  int max_iterations = 10000;
};

OpaCoupling parse_opa_coupling(std::string_view s);
DetuningInput parse_detuning_input(std::string_view s);
std::string_view to_string(OpaCoupling m);
std::string_view to_string(DetuningInput d);

struct SteadyState {
  cplx alpha_a;
  cplx alpha_c;
  cplx beta_1;
  cplx beta_2;
  double delta_c_eff = 0.0;   // shifted detuning entering the drift matrix
  double delta_c_bare = 0.0;  // bare detuning consistent with delta_c_eff
  double g_cap_1 = 0.0;       // g_1 |alpha_c|
  double g_cap_2 = 0.0;       // g_2 |alpha_c|
  int iterations = 0;
  double residual = 0.0;      // max relative residual of the three steady-state relations
};

// Throws NonConvergence when the iteration on |alpha_c|^2 exceeds
// max_iterations or falls into a period-2 cycle (a sign of multistability).
SteadyState solve_mean_field(const SystemParams& params, const MeanFieldOptions& options = {});

// Max relative residual of the steady-state relations for the given state.
// The cavity relations use the bare detuning that the state reports.
double steady_state_residual(const SystemParams& params, const SteadyState& ss,
                             OpaCoupling opa = OpaCoupling::Paper);

// Deterministic Heisenberg equations with noise dropped, integrated from zero
// amplitudes: the OPA term couples to conj(alpha_a) and the vibrational drive
// is +i g_k |alpha_c|^2, so the long-time limit is the Exact-mode fixed point.
// params.delta_c is the bare detuning. Integration stops early once the time
// derivative falls below 1e-14 relative to the state norm. Throws Diverged
// when the amplitudes blow up.
SteadyState integrate_classical(const SystemParams& params, double t_end, double dt);

}  // namespace mcom
