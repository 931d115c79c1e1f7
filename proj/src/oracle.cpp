#include "fastslow/oracle.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace fastslow {

namespace {

constexpr double four_pi_sq = 4.0 * std::numbers::pi * std::numbers::pi;

// Local transcriptions of the mode rates. Kept separate from the analytic
// module so the two routes share only the parameter struct.
struct LocalRates {
    double m11_0, m12, m21, m22_0; // matrix entries at q = 0
    double kappa;
    double lambda_fast_0;

    explicit LocalRates(const SystemParams& p) {
        m11_0 = p.alpha / p.eps - p.mu;
        m12 = p.beta / p.eps;
        m21 = p.gamma;
        m22_0 = p.delta - p.nu;
        kappa = -p.nu - p.beta * p.gamma / p.alpha + p.delta;
        const double x = p.delta - p.nu - p.alpha / p.eps + p.mu;
        const double omega = std::sqrt(x * x + 4.0 * p.beta * p.gamma / p.eps);
        lambda_fast_0 = 0.5 * (m11_0 + m22_0 - omega);
    }
};

long step_count(double t, double dt) {
    if (!(dt > 0.0))
        raise(errc::bad_argument, "oracle dt must be > 0");
    const long n = std::lround(t / dt);
    if (n < 1 || std::abs(static_cast<double>(n) * dt - t) > 1e-9 * std::max(t, dt)) {
        std::ostringstream msg;
        msg << "dt = " << dt << " does not divide t = " << t << " within rounding";
        raise(errc::time_step_mismatch, msg.str());
    }
    return n;
}

void check_stiffness(const SystemParams& p, const LocalRates& r, double dt, bool full_system) {
    if (dt * std::abs(r.lambda_fast_0) > 0.5) {
        std::ostringstream msg;
        msg << "stiffness guard: dt*|lambda_fast(0)| = " << dt * std::abs(r.lambda_fast_0)
            << " exceeds 0.5";
        raise(errc::stiffness, msg.str());
    }
    if (full_system && dt > p.eps / 10.0) {
        std::ostringstream msg;
        msg << "stiffness guard: dt = " << dt << " exceeds eps/10 = " << p.eps / 10.0;
        raise(errc::stiffness, msg.str());
    }
}

} // namespace

OracleConfig OracleConfig::fitted(double t, double dt_target) {
    if (!(t > 0.0) || !(dt_target > 0.0))
        raise(errc::bad_argument, "fitted oracle config needs t > 0 and dt_target > 0");
    const double n = std::ceil(t / dt_target - 1e-12);
    return OracleConfig{t / n};
}

ModeState rk4_mode_full(const SystemParams& p, double ksq, ModeState w, double t,
                        const OracleConfig& cfg) {
    const LocalRates r(p);
    check_stiffness(p, r, cfg.dt, true);
    if (t == 0.0) return w;
    const long n = step_count(t, cfg.dt);
    const double h = t / static_cast<double>(n);
    const double diff = four_pi_sq * ksq;
    const double a11 = r.m11_0 - diff;
    const double a22 = r.m22_0 - diff;
    const auto rhs = [&](const ModeState& s) -> ModeState {
        return {a11 * s[0] + r.m12 * s[1], r.m21 * s[0] + a22 * s[1]};
    };
    for (long i = 0; i < n; ++i) {
        const ModeState k1 = rhs(w);
        const ModeState k2 = rhs({w[0] + 0.5 * h * k1[0], w[1] + 0.5 * h * k1[1]});
        const ModeState k3 = rhs({w[0] + 0.5 * h * k2[0], w[1] + 0.5 * h * k2[1]});
        const ModeState k4 = rhs({w[0] + h * k3[0], w[1] + h * k3[1]});
        w[0] += h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]);
        w[1] += h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]);
    }
    return w;
}

SpectralPair rk4_full(const SystemParams& p, const SpectralPair& state0, double t,
                      const OracleConfig& cfg) {
    SpectralPair out = state0;
    if (t == 0.0) {
        const LocalRates r(p);
        check_stiffness(p, r, cfg.dt, true);
        return out;
    }
    const auto& lat = state0.u_hat.lattice();
    for (std::size_t i = 0; i < out.u_hat.size(); ++i) {
        const ModeState w = rk4_mode_full(p, lat.ksq(i),
                                          {state0.u_hat[i], state0.v_hat[i]}, t, cfg);
        out.u_hat[i] = w[0];
        out.v_hat[i] = w[1];
    }
    return out;
}

SpectralField rk4_limit(const SystemParams& p, const SpectralField& v0, double t,
                        const OracleConfig& cfg) {
    const LocalRates r(p);
    check_stiffness(p, r, cfg.dt, false);
    SpectralField v = v0;
    if (t == 0.0) return v;
    const long n = step_count(t, cfg.dt);
    const double h = t / static_cast<double>(n);
    const auto& lat = v0.lattice();
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double rate = -four_pi_sq * lat.ksq(i) + r.kappa;
        std::complex<double> y = v[i];
        for (long s = 0; s < n; ++s) {
            const auto k1 = rate * y;
            const auto k2 = rate * (y + 0.5 * h * k1);
            const auto k3 = rate * (y + 0.5 * h * k2);
            const auto k4 = rate * (y + h * k3);
            y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        v[i] = y;
    }
    return v;
}

SpectralField rk4_aux(const SystemParams& p, AuxKind which, const SpectralField& u0,
                      const SpectralField& v0, double t, const OracleConfig& cfg) {
    if (!u0.same_lattice(v0))
        raise(errc::bad_argument, "auxiliary oracle requires fields on one lattice");
    const LocalRates r(p);
    check_stiffness(p, r, cfg.dt, true);
    SpectralField u = u0;
    if (t == 0.0) return u;
    const long n = step_count(t, cfg.dt);
    const double h = t / static_cast<double>(n);
    const double drive_coeff = (which == AuxKind::tilde)
        ? p.beta / p.eps
        : p.beta / p.eps - (p.beta / p.alpha) * (p.mu + r.kappa);
    const auto& lat = u0.lattice();
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double diff = four_pi_sq * lat.ksq(i);
        const double hom = r.m11_0 - diff;
        const double drive_rate = -diff + r.kappa;
        const std::complex<double> vc = v0[i];
        const auto drive = [&](double s) { return drive_coeff * std::exp(drive_rate * s) * vc; };
        std::complex<double> y = u[i];
        for (long s = 0; s < n; ++s) {
            const double ts = static_cast<double>(s) * h;
            const auto k1 = hom * y + drive(ts);
            const auto k2 = hom * (y + 0.5 * h * k1) + drive(ts + 0.5 * h);
            const auto k3 = hom * (y + 0.5 * h * k2) + drive(ts + 0.5 * h);
            const auto k4 = hom * (y + h * k3) + drive(ts + h);
            y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        u[i] = y;
    }
    return u;
}

} // namespace fastslow
