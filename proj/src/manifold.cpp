#include "fastslow/manifold.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace fastslow {

namespace {

constexpr double four_pi_sq = 4.0 * std::numbers::pi * std::numbers::pi;
constexpr double residual_floor = 1e-30;

} // namespace

ManifoldLine slow_manifold(const SystemParams& p) {
    const DerivedConstants dc(p);
    return {dc.sigma_slow(), p.beta, LineKind::slow_eps};
}

ManifoldLine fast_manifold(const SystemParams& p) {
    const DerivedConstants dc(p);
    return {dc.sigma_fast(), p.beta, LineKind::fast_eps};
}

ManifoldLine critical_line(const SystemParams& p) {
    return {-2.0 * p.alpha, p.beta, LineKind::critical};
}

double residual(const ManifoldLine& line, const SpectralPair& state) {
    double worst = 0.0;
    for (std::size_t i = 0; i < state.u_hat.size(); ++i) {
        const auto r = line.sigma * state.u_hat[i] - 2.0 * line.beta * state.v_hat[i];
        worst = std::max(worst, std::abs(r));
    }
    return worst / std::max(h2_norm(state), residual_floor);
}

SpectralPair project_to_manifold(const ManifoldLine& line, const SpectralField& v) {
    if (line.sigma == 0.0)
        raise(errc::degenerate_line, "degenerate line: sigma = 0 has no graph over u");
    SpectralField u = v;
    u *= 2.0 * line.beta / line.sigma;
    return {std::move(u), v};
}

double graph_distance(const ManifoldLine& a, const ManifoldLine& b, double bound_m) {
    if (!(bound_m > 0.0))
        raise(errc::bad_argument, "graph distance needs a positive bound M");
    return bound_m * std::abs(a.slope() - b.slope());
}

double reduced_slow_exponent(const SystemParams& p, double ksq) {
    const DerivedConstants dc(p);
    if (dc.sigma_slow() == 0.0)
        raise(errc::degenerate_line, "degenerate slow line: sigma_slow = 0");
    return -four_pi_sq * ksq - p.nu + p.delta + 2.0 * p.beta * p.gamma / dc.sigma_slow();
}

std::optional<double> attraction_rate(const SystemParams& p, double ksq,
                                      double t_window, Vec2 probe) {
    const DerivedConstants dc(p);
    const double lam_fast = dc.lambda_fast_at(ksq);
    if (!(t_window * std::abs(lam_fast) >= 1.0)) {
        std::ostringstream msg;
        msg << "window too short: t_window*|lambda_fast| = "
            << t_window * std::abs(lam_fast) << " < 1";
        raise(errc::window_too_short, msg.str());
    }

    // fast coordinate of probe = cs*(2b, sigma_s) + cf*(2b, sigma_f)
    const double tb = 2.0 * p.beta;
    const double det = tb * dc.sigma_fast() - dc.sigma_slow() * tb;
    const double cf = (tb * probe.y - probe.x * dc.sigma_slow()) / det;
    const double probe_scale = std::max(std::abs(probe.x), std::abs(probe.y));
    if (std::abs(cf) * std::max(std::abs(tb), std::abs(dc.sigma_fast()))
            <= 1e-12 * probe_scale)
        return std::nullopt; // on the slow line: nothing to measure

    const Mat2 prop = mode_propagator(p, dc, ksq, t_window);
    const Vec2 evolved = prop.apply(probe);
    const double cf_t = (tb * evolved.y - evolved.x * dc.sigma_slow()) / det;
    return std::log(std::abs(cf_t / cf)) / t_window;
}

} // namespace fastslow
