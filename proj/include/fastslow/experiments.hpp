#pragma once

#include "fastslow/field.hpp"
#include "fastslow/params.hpp"

#include <array>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace fastslow {

struct BaseParams {
    double alpha = 0.0, beta = 0.0, gamma = 0.0, delta = 0.0, mu = 0.0, nu = 0.0;

    SystemParams with_eps(double eps) const {
        return {alpha, beta, gamma, delta, mu, nu, eps};
    }
};

// Log-spaced sample times T * r^((m-i)/m), i = 1..m, spanning (T*r, T].
// Doubling `samples` yields a superset of the previous grid, so sup-over-grid
// quantities never decrease under refinement.
struct TimeGrid {
    double horizon = 2.0;       // T
    int samples = 64;           // m
    double tmin_over_t = 0.5;   // r

    std::vector<double> points() const;
};

struct ExperimentConfig {
    BaseParams base;
    std::vector<double> eps_ladder; // strictly decreasing, length >= 4

    int dim = 1;
    double cutoff = 8.0;
    double dk = 0.01;

    std::vector<GaussianSpec> u0_spec; // ignored when on_critical
    std::vector<GaussianSpec> v0_spec;
    bool on_critical = true;

    TimeGrid time;

    // proposition-bounds extras; ladder/grid fall back to the main ones
    std::vector<double> bounds_ladder;
    std::optional<TimeGrid> bounds_time;
    double bounds_quasi_static_from = 0.1;

    std::uint64_t seed = 1;

    void validate() const; // throws on any violated constraint

    const std::vector<double>& ladder_for_bounds() const {
        return bounds_ladder.empty() ? eps_ladder : bounds_ladder;
    }
    const TimeGrid& time_for_bounds() const {
        return bounds_time ? *bounds_time : time;
    }
};

// Ordinary least squares on (log eps, log value).
struct RateFit {
    double slope = 0.0;
    double intercept = 0.0; // in log space
    double r_squared = 0.0;
    std::vector<std::pair<double, double>> points;
};

RateFit fit_rate(std::span<const std::pair<double, double>> points);

struct LadderRow {
    double eps = 0.0;
    double t_sup = 0.0;    // sample time attaining the sup
    double error_h2 = 0.0; // sup over the time grid of the H2xH2 gap
};

struct ConvergenceTable {
    std::vector<LadderRow> rows;                 // eps descending
    bool exact = false;                          // all sup errors identically 0
    std::optional<RateFit> fit;                  // absent when exact

    // initial-layer diagnostics (populated when on_critical == false)
    std::vector<double> corrected_sup;           // sup_t (error - layer)
    std::optional<RateFit> corrected_fit;
    double data_gap_norm = 0.0;                  // ||u0 - h0(v0)||_{H2}
    double v0_norm = 0.0;                        // ||v0||_{H2}

    // raw error curves, one per ladder eps, aligned with the time grid
    std::vector<std::vector<double>> error_curves;
    std::vector<double> grid;
};

ConvergenceTable convergence_ladder(const ExperimentConfig& cfg);

struct BoundCheck {
    std::string name;        // "i", "ii", "iii"
    double fitted_c = 0.0;   // calibrated on the coarsest ladder eps
    double max_ratio = 0.0;  // worst measured/(C*shape) over finer eps
    double slack = 0.0;      // allowed excess over 1 (calibration drift)
    long points = 0;         // verifiable evaluation points at finer eps
    bool pass = false;
};

struct BoundReport {
    std::array<BoundCheck, 3> bounds;
    bool pass = false;
};

BoundReport proposition_bounds(const ExperimentConfig& cfg);

struct ManifoldRow {
    double eps = 0.0;
    double graph_distance = 0.0;      // slow vs critical, M = 1
    double rate_gap = 0.0;            // max_k |reduced exponent - limit rate|
    double invariance_residual = 0.0; // after evolving on-manifold data
};

struct ManifoldTable {
    std::vector<ManifoldRow> rows;
    RateFit distance_fit;
    RateFit rate_gap_fit;
};

ManifoldTable manifold_convergence(const ExperimentConfig& cfg);

// H2-norm histories of the full solve at each ladder eps over the time grid.
struct SolveRow {
    double eps = 0.0;
    double t = 0.0;
    double u_h2 = 0.0;
    double v_h2 = 0.0;
};

std::vector<SolveRow> solve_histories(const ExperimentConfig& cfg);

// Cross-validation of the exact solver against the reference integrator at
// the coarsest ladder eps (dt = eps/100).
struct OracleCheck {
    double eps = 0.0;
    double t = 0.0;
    double rel_err = 0.0;
    bool pass = false; // rel_err <= 1e-6
};

OracleCheck oracle_crosscheck(const ExperimentConfig& cfg);

// Spectral identities at the coarsest ladder eps over random lattice modes:
// characteristic-polynomial substitution and eigen-pairing residuals.
struct EigenReport {
    double worst_char_residual = 0.0;
    double worst_pairing_residual = 0.0;
    int modes = 0;
    bool pass = false; // both residuals <= 1e-10
};

EigenReport eigen_identities(const ExperimentConfig& cfg, int modes = 50);

// |sigma_slow + 2 alpha| per ladder eps: the gap between the eps-scaled slow
// eigenvector and its limit direction (2 beta, -2 alpha). The gap/eps ratio
// increases toward its limit, so the constant is calibrated at the finest
// ladder point.
struct ScaledVectorCheck {
    std::vector<std::pair<double, double>> points; // (eps, gap)
    double fitted_c = 0.0;                         // gap/eps at the finest eps
    RateFit fit;
    bool pass = false; // gap <= C*eps across the ladder and slope in [0.9, 1.1]
};

ScaledVectorCheck scaled_eigenvector_limit(const ExperimentConfig& cfg);

} // namespace fastslow
