#pragma once

#include "fastslow/errors.hpp"

namespace fastslow {

// Coefficients of the fast-reaction system
//   eps*du/dt = eps*(Lap - mu)u + alpha*u + beta*v
//       dv/dt =     (Lap - nu)v + gamma*u + delta*v
// on R^n, with timescale separation eps.
struct SystemParams {
    double alpha = 0.0; // fast reaction rate, must be < 0
    double beta  = 0.0; // fast<-slow coupling, nonzero
    double gamma = 0.0; // slow<-fast coupling, nonzero
    double delta = 0.0; // slow self-coupling, nonzero
    double mu    = 0.0; // fast damping shift
    double nu    = 0.0; // slow damping shift
    double eps   = 0.0; // timescale separation, > 0
};

// Checks, in order: sign/zero conditions on alpha, beta, gamma, eps; the
// hyperbolicity condition eps^-1*alpha - mu < 0; the real-spectrum condition
// (delta - nu - eps^-1*alpha + mu)^2 + 4*eps^-1*beta*gamma > 0; finally
// delta != 0. Throws fastslow::error with a code and a message naming the
// violated condition. Returns the params unchanged on success.
SystemParams validate_params(const SystemParams& raw);

// Quantities derived from validated params. All per-mode spectra of the
// system are expressible through these plus |k|^2.
class DerivedConstants {
public:
    explicit DerivedConstants(const SystemParams& validated);

    double kappa() const { return kappa_; }          // -nu - beta*gamma/alpha + delta
    double omega_eps() const { return omega_; }      // sqrt(disc), > 0
    double sigma_slow() const { return sigma_slow_; }
    double sigma_fast() const { return sigma_fast_; }

    // trace of the mode matrix at |k|^2 = q
    double trace_at(double q) const;
    // determinant of the mode matrix at |k|^2 = q
    double det_at(double q) const;
    // eigenvalue branches; "slow" is the branch bounded as eps -> 0,
    // selected computationally (closest to kappa at q = 0)
    double lambda_slow_at(double q) const;
    double lambda_fast_at(double q) const;

    const SystemParams& params() const { return p_; }

private:
    SystemParams p_;
    double kappa_ = 0.0;
    double omega_ = 0.0;
    double slow_branch_sign_ = 1.0; // +1 when +omega branch is the slow one
    double sigma_slow_ = 0.0;
    double sigma_fast_ = 0.0;
};

inline DerivedConstants derive_constants(const SystemParams& validated) {
    return DerivedConstants(validated);
}

} // namespace fastslow
