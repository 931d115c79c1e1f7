#include "fastslow/params.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace fastslow {

const char* errc_name(errc c) {
    switch (c) {
        case errc::sign_violation: return "sign_violation";
        case errc::hyperbolicity_violation: return "hyperbolicity_violation";
        case errc::complex_omega: return "complex_omega";
        case errc::lattice_too_large: return "lattice_too_large";
        case errc::bad_argument: return "bad_argument";
        case errc::parameter_degeneracy: return "parameter_degeneracy";
        case errc::degenerate_line: return "degenerate_line";
        case errc::stiffness: return "stiffness";
        case errc::time_step_mismatch: return "time_step_mismatch";
        case errc::window_too_short: return "window_too_short";
        case errc::nonpositive_rate_value: return "nonpositive_rate_value";
        case errc::config_parse: return "config_parse";
        case errc::io_failure: return "io_failure";
    }
    return "unknown";
}

namespace {

double discriminant(const SystemParams& p) {
    const double x = p.delta - p.nu - p.alpha / p.eps + p.mu;
    return x * x + 4.0 * p.beta * p.gamma / p.eps;
}

} // namespace

SystemParams validate_params(const SystemParams& raw) {
    // The delta != 0 check deliberately comes after the spectral checks so
    // that a configuration violating both reports the spectral condition.
    std::ostringstream msg;
    if (!(raw.alpha < 0.0)) {
        msg << "sign violation: alpha must be < 0 (got alpha = " << raw.alpha << ")";
        raise(errc::sign_violation, msg.str());
    }
    if (raw.beta == 0.0)
        raise(errc::sign_violation, "sign violation: coupling beta must be nonzero");
    if (raw.gamma == 0.0)
        raise(errc::sign_violation, "sign violation: coupling gamma must be nonzero");
    if (!(raw.eps > 0.0)) {
        msg << "sign violation: eps must be > 0 (got eps = " << raw.eps << ")";
        raise(errc::sign_violation, msg.str());
    }
    const double fast_rate = raw.alpha / raw.eps - raw.mu;
    if (!(fast_rate < 0.0)) {
        msg << "hyperbolicity violation: eps^-1*alpha - mu must be < 0 (got "
            << fast_rate << ")";
        raise(errc::hyperbolicity_violation, msg.str());
    }
    const double disc = discriminant(raw);
    if (!(disc > 0.0)) {
        msg << "complex-Omega violation: (delta - nu - eps^-1*alpha + mu)^2 + "
               "4*eps^-1*beta*gamma must be > 0 (got " << disc << ")";
        raise(errc::complex_omega, msg.str());
    }
    if (raw.delta == 0.0)
        raise(errc::sign_violation, "sign violation: coupling delta must be nonzero");
    return raw;
}

DerivedConstants::DerivedConstants(const SystemParams& p) : p_(p) {
    kappa_ = -p.nu - p.beta * p.gamma / p.alpha + p.delta;
    omega_ = std::sqrt(discriminant(p));
    // Branch selection: the slow eigenvalue is the one that stays bounded as
    // eps -> 0; computationally, the branch closer to kappa at q = 0.
    const double half_trace0 = 0.5 * trace_at(0.0);
    const double lam_plus = half_trace0 + 0.5 * omega_;
    const double lam_minus = half_trace0 - 0.5 * omega_;
    slow_branch_sign_ = (std::abs(lam_plus - kappa_) <= std::abs(lam_minus - kappa_)) ? 1.0 : -1.0;
    const double base = p.eps * (p.delta - p.nu + p.mu) - p.alpha;
    sigma_slow_ = base + slow_branch_sign_ * p.eps * omega_;
    sigma_fast_ = base - slow_branch_sign_ * p.eps * omega_;
}

double DerivedConstants::trace_at(double q) const {
    constexpr double four_pi_sq = 4.0 * std::numbers::pi * std::numbers::pi;
    return p_.alpha / p_.eps - p_.mu + p_.delta - p_.nu - 2.0 * four_pi_sq * q;
}

double DerivedConstants::det_at(double q) const {
    constexpr double four_pi_sq = 4.0 * std::numbers::pi * std::numbers::pi;
    const double a11 = p_.alpha / p_.eps - p_.mu - four_pi_sq * q;
    const double a22 = p_.delta - p_.nu - four_pi_sq * q;
    return a11 * a22 - p_.beta * p_.gamma / p_.eps;
}

double DerivedConstants::lambda_slow_at(double q) const {
    return 0.5 * (trace_at(q) + slow_branch_sign_ * omega_);
}

double DerivedConstants::lambda_fast_at(double q) const {
    return 0.5 * (trace_at(q) - slow_branch_sign_ * omega_);
}

} // namespace fastslow
