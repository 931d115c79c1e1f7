#pragma once

#include "fastslow/lattice.hpp"
#include "fastslow/params.hpp"

#include <complex>
#include <span>
#include <vector>

namespace fastslow {

// One complex Fourier coefficient per lattice mode, in lattice mode order.
// A field representing a real-valued function satisfies
// coefficient(-k) == conj(coefficient(k)).
class SpectralField {
public:
    SpectralField() = default;
    explicit SpectralField(LatticePtr lattice)
        : lattice_(std::move(lattice)), coeff_(lattice_->size()) {}
    SpectralField(LatticePtr lattice, std::vector<std::complex<double>> coeff);

    const SpectralLattice& lattice() const { return *lattice_; }
    const LatticePtr& lattice_ptr() const { return lattice_; }
    std::size_t size() const { return coeff_.size(); }

    std::complex<double>& operator[](std::size_t i) { return coeff_[i]; }
    const std::complex<double>& operator[](std::size_t i) const { return coeff_[i]; }
    std::span<const std::complex<double>> coefficients() const { return coeff_; }

    SpectralField& operator+=(const SpectralField& other);
    SpectralField& operator-=(const SpectralField& other);
    SpectralField& operator*=(double s);
    SpectralField& operator*=(std::complex<double> s);

    friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
    friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
    friend SpectralField operator*(double s, SpectralField f) { return f *= s; }

    bool same_lattice(const SpectralField& other) const { return lattice_ == other.lattice_; }

private:
    LatticePtr lattice_;
    std::vector<std::complex<double>> coeff_;
};

// The state (u_hat, v_hat) of the system; both fields share one lattice.
struct SpectralPair {
    SpectralField u_hat;
    SpectralField v_hat;

    SpectralPair() = default;
    SpectralPair(SpectralField u, SpectralField v);
};

struct GaussianSpec {
    double width = 1.0; // a in amp*exp(-a*|x|^2), must be > 0
    double amp = 1.0;
};

// Exact transform of amp*exp(-a|x|^2) under the exp(-2*pi*i*k*x) convention:
// coefficient(k) = amp * (pi/a)^(n/2) * exp(-pi^2 |k|^2 / a).
SpectralField sample_gaussian(const LatticePtr& lattice, double a, double amp);
SpectralField sample_gaussian_mixture(const LatticePtr& lattice, std::span<const GaussianSpec> terms);

// Sobolev H^2 norm in Fourier form: sqrt( sum_k w_k (1+|k|^2)^2 |c_k|^2 ).
double h2_norm(const SpectralField& f);
// Product norm sqrt(||u||^2 + ||v||^2).
double h2_norm(const SpectralPair& s);

// Graph map of the critical set: h0(v) = -beta/alpha * v, so that
// alpha*h0(v) + beta*v = 0 coefficientwise.
SpectralField h0_map(const SpectralField& v, const SystemParams& params);

// max_k |c(-k) - conj(c(k))| <= tol * max_k |c(k)|
bool is_hermitian(const SpectralField& f, double tol = 1e-12);

} // namespace fastslow
