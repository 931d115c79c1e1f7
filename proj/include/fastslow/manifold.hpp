#pragma once

#include "fastslow/analytic.hpp"
#include "fastslow/field.hpp"
#include "fastslow/params.hpp"

#include <optional>

namespace fastslow {

enum class LineKind { slow_eps, fast_eps, critical };

// The line {(u, v) : sigma*u - 2*beta*v = 0} in the per-mode coefficient
// plane. For slow_eps/fast_eps the direction (2*beta, sigma) is an exact
// eigenvector of every mode matrix; for critical, sigma = -2*alpha recovers
// alpha*u + beta*v = 0.
struct ManifoldLine {
    double sigma = 0.0;
    double beta = 0.0;
    LineKind kind = LineKind::critical;

    // second-component slope of the graph v = slope(u)
    double slope() const { return sigma / (2.0 * beta); }
};

ManifoldLine slow_manifold(const SystemParams& validated);
ManifoldLine fast_manifold(const SystemParams& validated);
ManifoldLine critical_line(const SystemParams& validated);

// max over modes of |sigma*u_k - 2*beta*v_k| / max(||state||_{H2xH2}, floor);
// the floor guards the zero state.
double residual(const ManifoldLine& line, const SpectralPair& state);

// On-line initial data u = 2*beta*v/sigma; the result has residual 0 up to
// rounding. sigma == 0 is rejected.
SpectralPair project_to_manifold(const ManifoldLine& line, const SpectralField& v);

// M * |sigma_a/(2 beta) - sigma_b/(2 beta)|: the matched-first-component
// graph distance over ||u|| <= M, an upper bound for the Hausdorff distance
// between the two lines on that bounded set.
double graph_distance(const ManifoldLine& a, const ManifoldLine& b, double bound_m);

// Per-mode rate of the flow restricted to the slow manifold:
// -4pi^2 |k|^2 - nu + delta + 2*beta*gamma/sigma_slow. Equals lambda_slow(k).
double reduced_slow_exponent(const SystemParams& validated, double ksq);

// Decomposes the probe into slow+fast eigencomponents, evolves it with the
// exact propagator over [0, t_window], and returns the measured log-decay
// rate of the fast component. Returns nullopt when the probe starts on the
// slow line (no fast component to measure). Requires
// t_window * |lambda_fast| >= 1 so the window resolves the rate.
std::optional<double> attraction_rate(const SystemParams& validated, double ksq,
                                      double t_window, Vec2 probe = {1.0, 0.0});

} // namespace fastslow
