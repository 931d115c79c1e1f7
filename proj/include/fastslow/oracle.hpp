#pragma once

#include "fastslow/field.hpp"
#include "fastslow/params.hpp"

#include <array>
#include <complex>

namespace fastslow {

// Fixed-step classical Runge-Kutta reference integrator. Validates the exact
// solvers; on purpose it rebuilds every rate from the raw parameters instead
// of calling into the analytic module.
struct OracleConfig {
    double dt = 1e-4;

    // Largest dt that divides t within rounding and does not exceed target.
    static OracleConfig fitted(double t, double dt_target);
};

enum class AuxKind { tilde, eps0 };

using ModeState = std::array<std::complex<double>, 2>;

// Per-mode integration of d/dt w = M_k w from 0 to t.
ModeState rk4_mode_full(const SystemParams& p, double ksq, ModeState w0, double t,
                        const OracleConfig& cfg);

SpectralPair rk4_full(const SystemParams& p, const SpectralPair& state0, double t,
                      const OracleConfig& cfg);

SpectralField rk4_limit(const SystemParams& p, const SpectralField& v0, double t,
                        const OracleConfig& cfg);

// Integrates the chosen auxiliary fast equation; the slow drive is evaluated
// by closed form at every stage point.
SpectralField rk4_aux(const SystemParams& p, AuxKind which, const SpectralField& u0,
                      const SpectralField& v0, double t, const OracleConfig& cfg);

} // namespace fastslow
