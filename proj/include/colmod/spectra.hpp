// Finite-time bath correlation spectra of a thermal two-level
// ancilla coupled through sigma_x (x) sigma_x during one collision window.

#pragma once

#include "colmod/hamiltonians.hpp"

#include <complex>

namespace colmod {

struct SpectrumQuery {
    double omega = 0.0;  // system transition frequency, rad/ns
    double t = 0.0;      // global time, ns
    AncillaSpec ancilla;
    double collision_start = 0.0;
    double collision_end = 0.0;
};

// Offsets |omega -/+ 2 h_b| below this are treated as exact resonance (linear branch).
inline constexpr double kResonanceThreshold = 1e-9;
// Below this offset (rad/ns) the integral is evaluated by its power series.
inline constexpr double kSeriesThreshold = 1e-4;

/// int_0^t exp(i x s) ds, branch-selected for stability near x = 0.
std::complex<double> oscillating_integral(double x, double t);

/// Gamma_n(omega, t) = g^2 int_0^{t'} e^{i s omega}(rho_ee e^{2 i h_b s} + rho_gg e^{-2 i h_b s}) ds
/// with t' = t - collision_start; zero outside [collision_start, collision_end].
std::complex<double> gamma(const SpectrumQuery& q);

/// Lindblad coefficient 2 Re Gamma(omega, t) entering D(rho, A(omega)). Unless
/// `include_rotating` is set, only the branch nearest resonance is kept.
double dissipation_rate(const SpectrumQuery& q, bool include_rotating = false);

/// pop g^2 sin(delta t)/delta, with the delta -> 0 limit pop g^2 t.
double detuned_rate(double delta, double t_local, double pop, double g);

/// Re Gamma(2 h_s)/Re Gamma(-2 h_s) at resonance; +inf when the ancilla has no
/// excited population.
double kms_ratio(double h_s, const AncillaSpec& ancilla);

}  // namespace colmod
