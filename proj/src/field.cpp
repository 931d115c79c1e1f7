#include "fastslow/field.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace fastslow {

SpectralField::SpectralField(LatticePtr lattice, std::vector<std::complex<double>> coeff)
    : lattice_(std::move(lattice)), coeff_(std::move(coeff)) {
    if (coeff_.size() != lattice_->size())
        raise(errc::bad_argument, "coefficient count does not match lattice size");
}

SpectralField& SpectralField::operator+=(const SpectralField& other) {
    if (!same_lattice(other))
        raise(errc::bad_argument, "field arithmetic requires a shared lattice");
    for (std::size_t i = 0; i < coeff_.size(); ++i) coeff_[i] += other.coeff_[i];
    return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
    if (!same_lattice(other))
        raise(errc::bad_argument, "field arithmetic requires a shared lattice");
    for (std::size_t i = 0; i < coeff_.size(); ++i) coeff_[i] -= other.coeff_[i];
    return *this;
}

SpectralField& SpectralField::operator*=(double s) {
    for (auto& c : coeff_) c *= s;
    return *this;
}

SpectralField& SpectralField::operator*=(std::complex<double> s) {
    for (auto& c : coeff_) c *= s;
    return *this;
}

SpectralPair::SpectralPair(SpectralField u, SpectralField v)
    : u_hat(std::move(u)), v_hat(std::move(v)) {
    if (!u_hat.same_lattice(v_hat))
        raise(errc::bad_argument, "pair components must share one lattice");
}

SpectralField sample_gaussian(const LatticePtr& lattice, double a, double amp) {
    if (!(a > 0.0))
        raise(errc::bad_argument, "gaussian width parameter must be > 0");
    SpectralField f(lattice);
    const double n_half = 0.5 * lattice->dim();
    const double scale = amp * std::pow(std::numbers::pi / a, n_half);
    const double decay = std::numbers::pi * std::numbers::pi / a;
    for (std::size_t i = 0; i < f.size(); ++i)
        f[i] = scale * std::exp(-decay * lattice->ksq(i));
    return f;
}

SpectralField sample_gaussian_mixture(const LatticePtr& lattice, std::span<const GaussianSpec> terms) {
    SpectralField f(lattice);
    for (const auto& g : terms) f += sample_gaussian(lattice, g.width, g.amp);
    return f;
}

double h2_norm(const SpectralField& f) {
    const auto& lat = f.lattice();
    const double w = lat.weight();
    double sum = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double m = 1.0 + lat.ksq(i);
        sum += w * m * m * std::norm(f[i]);
    }
    return std::sqrt(sum);
}

double h2_norm(const SpectralPair& s) {
    const double nu = h2_norm(s.u_hat);
    const double nv = h2_norm(s.v_hat);
    return std::sqrt(nu * nu + nv * nv);
}

SpectralField h0_map(const SpectralField& v, const SystemParams& params) {
    SpectralField u = v;
    u *= -params.beta / params.alpha;
    return u;
}

bool is_hermitian(const SpectralField& f, double tol) {
    double max_abs = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i)
        max_abs = std::max(max_abs, std::abs(f[i]));
    double worst = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const auto mirrored = f[f.lattice().conjugate_index(i)];
        worst = std::max(worst, std::abs(mirrored - std::conj(f[i])));
    }
    return worst <= tol * std::max(max_abs, 1e-300);
}

} // namespace fastslow
