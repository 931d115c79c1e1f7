#include "fastslow/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace fastslow {

namespace {

constexpr double four_pi_sq = 4.0 * std::numbers::pi * std::numbers::pi;

double max_abs_entry(const Mat2& m) {
    return std::max({std::abs(m.a11), std::abs(m.a12), std::abs(m.a21), std::abs(m.a22)});
}

// Denominator of the auxiliary closed forms; zero means the homogeneous rate
// coincides with the drive rate and the integral degenerates.
double aux_denominator(const SystemParams& p, double kappa) {
    return -p.alpha + p.eps * p.mu + p.eps * kappa;
}

void check_aux_denominator(const SystemParams& p, double kappa) {
    const double den = aux_denominator(p, kappa);
    const double scale = std::abs(p.alpha) + p.eps * (std::abs(p.mu) + std::abs(kappa));
    if (std::abs(den) <= 1e-14 * scale)
        raise(errc::parameter_degeneracy,
              "parameter degeneracy: -alpha + eps*mu + eps*kappa vanishes; the "
              "auxiliary closed forms are singular for these parameters");
}

} // namespace

Mat2 mode_matrix(const SystemParams& p, double ksq) {
    const double diff = four_pi_sq * ksq;
    return {p.alpha / p.eps - p.mu - diff, p.beta / p.eps,
            p.gamma, p.delta - p.nu - diff};
}

Mat2 mode_matrix(const SystemParams& p, std::span<const double> k) {
    return mode_matrix(p, ksq_of(k));
}

Mat2 detail::expm_series(const Mat2& m, double t) {
    // scale so the scaled norm is <= 1/2, run the Taylor series to machine
    // precision, then square back
    Mat2 a{m.a11 * t, m.a12 * t, m.a21 * t, m.a22 * t};
    int squarings = 0;
    double scale = max_abs_entry(a);
    while (scale > 0.5 && squarings < 64) {
        a = {a.a11 * 0.5, a.a12 * 0.5, a.a21 * 0.5, a.a22 * 0.5};
        scale *= 0.5;
        ++squarings;
    }
    Mat2 sum = Mat2::identity();
    Mat2 term = Mat2::identity();
    for (int n = 1; n <= 24; ++n) {
        term = term.multiply(a);
        const double inv = 1.0 / n;
        term = {term.a11 * inv, term.a12 * inv, term.a21 * inv, term.a22 * inv};
        sum = {sum.a11 + term.a11, sum.a12 + term.a12,
               sum.a21 + term.a21, sum.a22 + term.a22};
        if (max_abs_entry(term) < 1e-18 * std::max(1.0, max_abs_entry(sum))) break;
    }
    for (int s = 0; s < squarings; ++s) sum = sum.multiply(sum);
    return sum;
}

Mat2 mode_propagator(const SystemParams& p, const DerivedConstants& dc, double ksq, double t) {
    const Mat2 m = mode_matrix(p, ksq);
    const double omega = dc.omega_eps();
    if (omega <= 1e-8 * std::max(1.0, max_abs_entry(m)))
        return detail::expm_series(m, t);

    // exp(Mt) = e^{lf t} I + (e^{ls t} - e^{lf t}) (M - lf I) / (ls - lf)
    const double ls = dc.lambda_slow_at(ksq);
    const double lf = dc.lambda_fast_at(ksq);
    const double es = std::exp(ls * t);
    const double ef = std::exp(lf * t);
    const double c = (es - ef) / (ls - lf);
    return {ef + c * (m.a11 - lf), c * m.a12,
            c * m.a21, ef + c * (m.a22 - lf)};
}

Mat2 mode_propagator(const SystemParams& p, double ksq, double t) {
    return mode_propagator(p, derive_constants(p), ksq, t);
}

SpectralPair solve_full(const SystemParams& p, const SpectralPair& state0, double t) {
    const DerivedConstants dc(p);
    SpectralPair out = state0;
    const auto& lat = state0.u_hat.lattice();
    for (std::size_t i = 0; i < state0.u_hat.size(); ++i) {
        const Mat2 prop = mode_propagator(p, dc, lat.ksq(i), t);
        const auto u = state0.u_hat[i];
        const auto v = state0.v_hat[i];
        out.u_hat[i] = prop.a11 * u + prop.a12 * v;
        out.v_hat[i] = prop.a21 * u + prop.a22 * v;
    }
    return out;
}

SpectralPair solve_limit(const SystemParams& p, const SpectralField& v0, double t) {
    const DerivedConstants dc(p);
    SpectralField v = v0;
    const auto& lat = v0.lattice();
    for (std::size_t i = 0; i < v.size(); ++i)
        v[i] *= std::exp((-four_pi_sq * lat.ksq(i) + dc.kappa()) * t);
    SpectralField u = h0_map(v, p);
    return {std::move(u), std::move(v)};
}

namespace {

SpectralField solve_aux_common(const SystemParams& p, const SpectralField& u0,
                               const SpectralField& v0, double t, double drive_coeff) {
    if (!u0.same_lattice(v0))
        raise(errc::bad_argument, "auxiliary solve requires fields on one lattice");
    const DerivedConstants dc(p);
    const double hom_rate = -p.mu + p.alpha / p.eps; // plus the -4pi^2 q diffusion shift
    SpectralField out = u0;
    const auto& lat = u0.lattice();
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double diff = four_pi_sq * lat.ksq(i);
        const double ehom = std::exp((hom_rate - diff) * t);
        const double edrive = std::exp((-diff + dc.kappa()) * t);
        out[i] = ehom * u0[i] + drive_coeff * (edrive - ehom) * v0[i];
    }
    return out;
}

} // namespace

SpectralField solve_aux_tilde(const SystemParams& p, const SpectralField& u0,
                              const SpectralField& v0, double t) {
    const DerivedConstants dc(p);
    check_aux_denominator(p, dc.kappa());
    const double coeff = p.beta / aux_denominator(p, dc.kappa());
    return solve_aux_common(p, u0, v0, t, coeff);
}

SpectralField solve_aux_eps0(const SystemParams& p, const SpectralField& u0,
                             const SpectralField& v0, double t) {
    const DerivedConstants dc(p);
    check_aux_denominator(p, dc.kappa());
    const double kappa = dc.kappa();
    const double coeff = (p.beta - p.eps * (p.beta / p.alpha) * (p.mu + kappa))
                         / aux_denominator(p, kappa);
    return solve_aux_common(p, u0, v0, t, coeff);
}

} // namespace fastslow
