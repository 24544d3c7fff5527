#pragma once

#include <complex>
#include <span>
#include <vector>

#include "lagrising/instance.hpp"

namespace lagrising {

using Complex = std::complex<double>;

// Knobs for the continuous-time solver family. alpha/gamma broadcast: a
// single entry is shared by every oscillator, otherwise one entry per
// oscillator is required.
struct OscParams {
  std::vector<double> alpha{1.0};  // loss rate
  std::vector<double> gamma{0.0};  // gain; SHIL strength for the phase model
  double coupling_scale = 1.0;     // radio: 1/(4 Rc C0); phase: 1/Rc
  double r_c = 0.25;               // coupling resistance (radio, phase)
  double c_0 = 1.0;                // oscillator capacitance (radio)
  double beta_sat = 0.0;           // cubic saturation / nonlinear attenuation
  double u_rot = 0.0;              // nonlinear phase rotation (polariton)
  double kerr_k = 1.0;             // Kerr coefficient
  double pump_p = 0.0;             // parametric pump strength (kerr)
  double xi0 = 1.0;                // elastic coupling strength (kerr)
  double beta_leleu = 0.1;         // error-variable rate
  double kappa_p = 0.01;           // multiplier ascent rate

  // radio parameters with the derived scale 1/(4 Rc C0) kept consistent
  static OscParams radio_circuit(double r_c, double c_0, std::size_t n);
};

double alpha_at(const OscParams& p, std::size_t i);
double gamma_at(const OscParams& p, std::size_t i);

// Amplitude dynamics with loss, gain, dissipative coupling, and optional
// cubic saturation:
//   dc_i/dt = (-alpha_i + gamma_i) c_i - sum_j J_ij c_j - beta_sat c_i^3
// With beta_sat = 0 this is -(1/2) of the gradient of opo_power.
void opo_rhs(const Instance& inst, const OscParams& p, std::span<const double> c,
             std::span<double> dc);

// LC-circuit amplitude dynamics (note the + sign on the coupling term):
//   dc_i/dt = coupling_scale sum_j J_ij c_j - alpha_i c_i + gamma_i c_i
void radio_rhs(const Instance& inst, const OscParams& p, std::span<const double> c,
               std::span<double> dc);

// Polarization-difference dynamics of coupled laser cores:
//   dmu_i/dt = (-alpha_i + gamma_i) mu_i + sum_j J_ij mu_j
void fiber_rhs(const Instance& inst, const OscParams& p, std::span<const double> mu,
               std::span<double> dmu);

// Phase dynamics with sub-harmonic locking; p.gamma holds the locking
// strength lambda_i and coupling_scale = 1/Rc:
//   dphi_i/dt = -coupling_scale sum_j J_ij sin(phi_i - phi_j) - lambda_i sin(2 phi_i)
void phase_rhs(const Instance& inst, const OscParams& p, std::span<const double> phi,
               std::span<double> dphi);

// Complex condensate amplitudes with saturable gain and nonlinear rotation:
//   dE_i/dt = (gamma_i - beta_sat |E_i|^2) E_i - i u_rot |E_i|^2 E_i - sum_j J_ij E_j
void polariton_rhs(const Instance& inst, const OscParams& p, std::span<const Complex> e,
                   std::span<Complex> de);

// Multiplier (gain) ascent toward the unit-amplitude constraint:
//   dgamma_i/dt = kappa_p (1 - x_i^2)     or     kappa_p (1 - |E_i|^2)
void multiplier_feedback_rhs(std::span<const double> x, double kappa_p,
                             std::span<double> dgamma);
void multiplier_feedback_rhs(std::span<const Complex> e, double kappa_p,
                             std::span<double> dgamma);

// Amplitude dynamics with per-variable error weights on the coupling
// (non-symmetric effective interaction e_i J_ij):
//   dx_i/dt = (-alpha + gamma) x_i + e_i sum_j J_ij x_j
//   de_i/dt = beta_leleu (1 - x_i^2) e_i
void leleu_rhs(const Instance& inst, const OscParams& p, std::span<const double> x,
               std::span<const double> err, std::span<double> dx, std::span<double> derr);

// Kerr-nonlinear parametric oscillators, both quadratures:
//   dc_i/dt =  K (c_i^2 + s_i^2) s_i + p s_i + xi0 sum_j J_ij s_j
//   ds_i/dt = -K (c_i^2 + s_i^2) c_i + p c_i - xi0 sum_j J_ij c_j
void kerr_rhs(const Instance& inst, const OscParams& p, std::span<const double> c,
              std::span<const double> s, std::span<double> dc, std::span<double> ds);

// --- merit functions paired with the dynamics above ------------------------
// Each solver descends its paired function: rhs = -(scale) * grad(merit),
// with scale 1/2 except radio (1/(2 C0)). These are what trajectory records
// log and what the gradient-consistency tests differentiate.

// net power dissipation sum J c c + sum alpha c^2 - sum gamma c^2
double opo_power(const Instance& inst, const OscParams& p, std::span<const double> c);
// same with the constraint offset: - sum gamma (c^2 - 1)
double opo_lagrange(const Instance& inst, const OscParams& p, std::span<const double> c);

// -(1/4Rc) sum J c c + sum alpha C0 c^2 - sum gamma C0 (c^2 - 1); uses p.r_c, p.c_0
double radio_lagrange(const Instance& inst, const OscParams& p, std::span<const double> c);

// sum alpha mu^2 - sum J mu mu - sum gamma (mu^2 - 1)
double fiber_lagrange(const Instance& inst, const OscParams& p, std::span<const double> mu);

// -(1/Rc) sum J cos(phi_i - phi_j) - sum lambda (cos 2phi - 1)
double phase_lagrange(const Instance& inst, const OscParams& p, std::span<const double> phi);

// sum J (c c' + s s') + (beta/2) sum |E|^4 - sum gamma (|E|^2 - 1)
double polariton_lagrange(const Instance& inst, const OscParams& p, std::span<const Complex> e);

// bare quadratic sum_{i,j} J_ij x_i x_j (recorded for solvers without a
// paired Lagrange function)
double quadratic_merit(const Instance& inst, std::span<const double> x);

}  // namespace lagrising
