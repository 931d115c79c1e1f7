#pragma once

#include "fastslow/field.hpp"
#include "fastslow/params.hpp"

#include <span>

namespace fastslow {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

struct Mat2 {
    double a11 = 0.0, a12 = 0.0;
    double a21 = 0.0, a22 = 0.0;

    double trace() const { return a11 + a22; }
    double det() const { return a11 * a22 - a12 * a21; }
    Vec2 apply(Vec2 v) const { return {a11 * v.x + a12 * v.y, a21 * v.x + a22 * v.y}; }
    Mat2 multiply(const Mat2& o) const {
        return {a11 * o.a11 + a12 * o.a21, a11 * o.a12 + a12 * o.a22,
                a21 * o.a11 + a22 * o.a21, a21 * o.a12 + a22 * o.a22};
    }
    static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
};

inline double ksq_of(std::span<const double> k) {
    double q = 0.0;
    for (double kd : k) q += kd * kd;
    return q;
}

// Per-mode coefficient matrix at |k|^2 = q:
//   [ eps^-1*alpha - mu - 4pi^2 q    eps^-1*beta              ]
//   [ gamma                          delta - nu - 4pi^2 q     ]
Mat2 mode_matrix(const SystemParams& p, double ksq);
Mat2 mode_matrix(const SystemParams& p, std::span<const double> k);

// Exact matrix exponential exp(M_k * t). Uses the spectral two-projector
// formula when the eigenvalue gap omega is resolvable relative to the matrix
// scale, and falls back to scaling-and-squaring otherwise.
Mat2 mode_propagator(const SystemParams& p, const DerivedConstants& dc, double ksq, double t);
Mat2 mode_propagator(const SystemParams& p, double ksq, double t);

namespace detail {
// Scaling-and-squaring exponential for the near-degenerate regime.
Mat2 expm_series(const Mat2& m, double t);
} // namespace detail

// One exact step of the full system: per mode, (u,v)(t) = P(k,t) (u0,v0).
SpectralPair solve_full(const SystemParams& p, const SpectralPair& state0, double t);

// Exact limit-system flow on the critical set: v(t) = exp((-4pi^2|k|^2 + kappa) t) v0,
// u(t) = h0(v(t)).
SpectralPair solve_limit(const SystemParams& p, const SpectralField& v0, double t);

// Companion fast equation driven by the limit flow, without the order-eps
// correction term; closed form of its variation-of-constants integral.
SpectralField solve_aux_tilde(const SystemParams& p, const SpectralField& u0,
                              const SpectralField& v0, double t);

// Fast equation with the order-eps correction term; same structure with the
// coefficient (beta - eps*beta/alpha*(mu+kappa)) / (-alpha + eps*mu + eps*kappa).
SpectralField solve_aux_eps0(const SystemParams& p, const SpectralField& u0,
                             const SpectralField& v0, double t);

} // namespace fastslow
