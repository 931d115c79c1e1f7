#pragma once

#include <stdexcept>
#include <string>

namespace fastslow {

// Every failure mode carries a distinct code so callers (and the CLI exit-code
// mapping) can react without parsing message text.
enum class errc {
    sign_violation,          // alpha >= 0, zero coupling, or eps <= 0
    hyperbolicity_violation, // eps^-1*alpha - mu >= 0
    complex_omega,           // discriminant <= 0, oscillatory regime
    lattice_too_large,       // mode count exceeds the configured budget
    bad_argument,            // malformed argument outside the validation trio
    parameter_degeneracy,    // -alpha + eps*mu + eps*kappa == 0 in the auxiliary closed forms
    degenerate_line,         // sigma == 0 line cannot be used as a graph over u
    stiffness,               // oracle step too large for the fast rate
    time_step_mismatch,      // dt does not divide t within rounding
    window_too_short,        // attraction window does not resolve the fast rate
    nonpositive_rate_value,  // log-log fit fed a value <= 0
    config_parse,            // config file unreadable or schema violation
    io_failure,              // filesystem error on artifact emission
};

const char* errc_name(errc c);

class error : public std::runtime_error {
public:
    error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    errc code() const noexcept { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void raise(errc code, const std::string& what) {
    throw error(code, what);
}

} // namespace fastslow
