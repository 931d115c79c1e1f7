#include "fastslow/experiments.hpp"

#include "fastslow/analytic.hpp"
#include "fastslow/manifold.hpp"
#include "fastslow/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace fastslow {

namespace {

constexpr double four_pi_sq = 4.0 * std::numbers::pi * std::numbers::pi;

SpectralField build_mixture(const LatticePtr& lat, std::span<const GaussianSpec> spec) {
    if (spec.empty()) return SpectralField(lat); // zero field
    return sample_gaussian_mixture(lat, spec);
}

} // namespace

std::vector<double> TimeGrid::points() const {
    std::vector<double> ts(static_cast<std::size_t>(samples));
    for (int i = 1; i <= samples; ++i)
        ts[static_cast<std::size_t>(i - 1)] =
            horizon * std::pow(tmin_over_t, static_cast<double>(samples - i) / samples);
    return ts;
}

void ExperimentConfig::validate() const {
    if (eps_ladder.size() < 4)
        raise(errc::bad_argument, "eps ladder needs at least 4 points for rate fits");
    for (std::size_t i = 0; i + 1 < eps_ladder.size(); ++i)
        if (!(eps_ladder[i] > eps_ladder[i + 1]))
            raise(errc::bad_argument, "eps ladder must be strictly decreasing");
    for (double eps : eps_ladder) validate_params(base.with_eps(eps));
    for (double eps : ladder_for_bounds()) validate_params(base.with_eps(eps));
    if (!(time.horizon > 0.0))
        raise(errc::bad_argument, "time horizon must be > 0");
    if (time.samples < 1)
        raise(errc::bad_argument, "time grid needs at least one sample");
    if (!(time.tmin_over_t > 0.0 && time.tmin_over_t < 1.0))
        raise(errc::bad_argument, "time grid ratio must lie in (0, 1)");
    for (const auto& g : u0_spec)
        if (!(g.width > 0.0)) raise(errc::bad_argument, "gaussian width must be > 0");
    for (const auto& g : v0_spec)
        if (!(g.width > 0.0)) raise(errc::bad_argument, "gaussian width must be > 0");
}

RateFit fit_rate(std::span<const std::pair<double, double>> points) {
    if (points.size() < 4)
        raise(errc::bad_argument, "rate fit needs at least 4 points");
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (const auto& [x, y] : points) {
        if (!(x > 0.0) || !(y > 0.0)) {
            std::ostringstream msg;
            msg << "rate fit needs positive values (got " << x << ", " << y << ")";
            raise(errc::nonpositive_rate_value, msg.str());
        }
        const double lx = std::log(x), ly = std::log(y);
        sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly; syy += ly * ly;
    }
    const double n = static_cast<double>(points.size());
    const double denom = n * sxx - sx * sx;
    RateFit fit;
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
    const double ss_tot = syy - sy * sy / n;
    double ss_res = 0.0;
    for (const auto& [x, y] : points) {
        const double r = std::log(y) - (fit.intercept + fit.slope * std::log(x));
        ss_res += r * r;
    }
    fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    fit.points.assign(points.begin(), points.end());
    return fit;
}

ConvergenceTable convergence_ladder(const ExperimentConfig& cfg) {
    cfg.validate();
    const auto lat = SpectralLattice::build(cfg.dim, cfg.cutoff, cfg.dk);
    const auto ts = cfg.time.points();

    ConvergenceTable table;
    table.grid = ts;
    const SpectralField v0 = build_mixture(lat, cfg.v0_spec);
    table.v0_norm = h2_norm(v0);

    for (double eps : cfg.eps_ladder) {
        const SystemParams p = validate_params(cfg.base.with_eps(eps));
        const SpectralField u0 =
            cfg.on_critical ? h0_map(v0, p) : build_mixture(lat, cfg.u0_spec);
        const SpectralField gap0 = u0 - h0_map(v0, p);
        const double gap_norm = h2_norm(gap0);
        table.data_gap_norm = gap_norm; // h0 is eps-independent, same for all rows

        const SpectralPair state0{u0, v0};
        LadderRow row{eps, ts.front(), 0.0};
        std::vector<double> curve;
        curve.reserve(ts.size());
        double corrected_max = 0.0;
        for (double t : ts) {
            const SpectralPair full = solve_full(p, state0, t);
            const SpectralPair limit = solve_limit(p, v0, t);
            const SpectralPair diff{full.u_hat - limit.u_hat, full.v_hat - limit.v_hat};
            const double err = h2_norm(diff);
            curve.push_back(err);
            if (err > row.error_h2) {
                row.error_h2 = err;
                row.t_sup = t;
            }
            const double layer = std::exp((p.alpha / p.eps - p.mu) * t) * gap_norm;
            corrected_max = std::max(corrected_max, err - layer);
        }
        table.rows.push_back(row);
        table.error_curves.push_back(std::move(curve));
        table.corrected_sup.push_back(corrected_max);
    }

    std::vector<std::pair<double, double>> pts;
    for (const auto& r : table.rows) pts.emplace_back(r.eps, r.error_h2);
    table.exact = std::all_of(pts.begin(), pts.end(),
                              [](const auto& p) { return p.second == 0.0; });
    if (!table.exact) {
        table.fit = fit_rate(pts);
        if (!cfg.on_critical) {
            std::vector<std::pair<double, double>> cpts;
            bool positive = true;
            for (std::size_t i = 0; i < table.rows.size(); ++i) {
                if (!(table.corrected_sup[i] > 0.0)) { positive = false; break; }
                cpts.emplace_back(table.rows[i].eps, table.corrected_sup[i]);
            }
            if (positive) table.corrected_fit = fit_rate(cpts);
        }
    }
    return table;
}

namespace {

struct BoundAccumulator {
    std::vector<double> lhs, rhs;
};

} // namespace

BoundReport proposition_bounds(const ExperimentConfig& cfg) {
    cfg.validate();
    const auto lat = SpectralLattice::build(cfg.dim, cfg.cutoff, cfg.dk);
    const auto ts = cfg.time_for_bounds().points();
    const auto& ladder = cfg.ladder_for_bounds();

    const SpectralField v0 = build_mixture(lat, cfg.v0_spec);
    const SpectralField u0 = build_mixture(lat, cfg.u0_spec);
    const double v0_norm = h2_norm(v0);

    // Per-eps samples of (lhs, shape) for each bound. Shapes follow the exact
    // closed-form prefactors so the fitted constant carries no leading-order
    // eps dependence:
    //   (i)   |beta|/|-alpha+eps(mu+kappa)| * sup_{s<=t} ||v_eps - v_lim||,
    //         sampled in the quasi-static window t >= bounds_quasi_static_from;
    //   (ii)  eps|beta(mu+kappa)/alpha|/|-alpha+eps(mu+kappa)|
    //         * |e^{kappa t} - e^{(-mu+alpha/eps)t}| * ||v0||;
    //   (iii) e^{(-mu+alpha/eps)t} * ||u0 - h0(v0)||, only at points where the
    //         decay factor is representable in double precision.
    std::vector<std::array<BoundAccumulator, 3>> samples;
    samples.reserve(ladder.size());

    for (double eps : ladder) {
        const SystemParams p = validate_params(cfg.base.with_eps(eps));
        const DerivedConstants dc(p);
        const double kappa = dc.kappa();
        const double denom = std::abs(-p.alpha + p.eps * p.mu + p.eps * kappa);
        const double gain_i = std::abs(p.beta) / denom;
        const double pref_ii = p.eps * std::abs((p.beta / p.alpha) * (p.mu + kappa)) / denom;
        const double fast_rate = -p.mu + p.alpha / p.eps;
        const SpectralField h0v0 = h0_map(v0, p);
        const double gap_norm = h2_norm(u0 - h0v0);

        std::array<BoundAccumulator, 3> acc;
        double running_v_sup = 0.0;
        for (double t : ts) {
            const SpectralPair full = solve_full(p, {u0, v0}, t);
            const SpectralPair limit = solve_limit(p, v0, t);
            const SpectralField ut = solve_aux_tilde(p, u0, v0, t);
            const SpectralField ue0 = solve_aux_eps0(p, u0, v0, t);
            running_v_sup = std::max(running_v_sup, h2_norm(full.v_hat - limit.v_hat));

            if (t >= cfg.bounds_quasi_static_from) {
                acc[0].lhs.push_back(h2_norm(full.u_hat - ut));
                acc[0].rhs.push_back(gain_i * running_v_sup);
            }
            acc[1].lhs.push_back(h2_norm(ue0 - ut));
            acc[1].rhs.push_back(pref_ii *
                                 std::abs(std::exp(kappa * t) - std::exp(fast_rate * t)) *
                                 v0_norm);
            const double decay = std::exp(fast_rate * t);
            if (decay >= 1e-12) {
                acc[2].lhs.push_back(h2_norm(ue0 - limit.u_hat));
                acc[2].rhs.push_back(decay * gap_norm);
            }
        }
        samples.push_back(std::move(acc));
    }

    BoundReport report;
    const std::array<const char*, 3> names{"i", "ii", "iii"};
    // (i) carries genuine second-order calibration drift; (ii)/(iii) follow
    // exact identities and only need rounding headroom.
    const std::array<double, 3> slack{5e-2, 1e-6, 1e-6};
    report.pass = true;
    for (std::size_t b = 0; b < 3; ++b) {
        BoundCheck check;
        check.name = names[b];
        check.slack = slack[b];
        const auto& coarse = samples.front()[b];
        double c = 0.0;
        for (std::size_t i = 0; i < coarse.lhs.size(); ++i)
            if (coarse.rhs[i] > 0.0) c = std::max(c, coarse.lhs[i] / coarse.rhs[i]);
        check.fitted_c = c;
        double worst = 0.0;
        long npts = 0;
        for (std::size_t e = 1; e < samples.size(); ++e) {
            const auto& s = samples[e][b];
            for (std::size_t i = 0; i < s.lhs.size(); ++i) {
                if (!(s.rhs[i] > 0.0) || c == 0.0) continue;
                worst = std::max(worst, s.lhs[i] / (c * s.rhs[i]));
                ++npts;
            }
        }
        check.max_ratio = worst;
        check.points = npts;
        check.pass = worst <= 1.0 + check.slack;
        report.pass = report.pass && check.pass;
        report.bounds[b] = check;
    }
    return report;
}

ManifoldTable manifold_convergence(const ExperimentConfig& cfg) {
    cfg.validate();
    const auto lat = SpectralLattice::build(cfg.dim, cfg.cutoff, cfg.dk);
    const SpectralField v0 = build_mixture(lat, cfg.v0_spec);

    ManifoldTable table;
    for (double eps : cfg.eps_ladder) {
        const SystemParams p = validate_params(cfg.base.with_eps(eps));
        const DerivedConstants dc(p);
        const ManifoldLine slow = slow_manifold(p);
        const ManifoldLine crit = critical_line(p);

        ManifoldRow row;
        row.eps = eps;
        row.graph_distance = graph_distance(slow, crit, 1.0);

        double gap = 0.0;
        for (std::size_t i = 0; i < lat->size(); ++i) {
            const double q = lat->ksq(i);
            const double limit_rate = -four_pi_sq * q + dc.kappa();
            gap = std::max(gap, std::abs(reduced_slow_exponent(p, q) - limit_rate));
        }
        row.rate_gap = gap;

        const SpectralPair on_manifold = project_to_manifold(slow, v0);
        double worst = 0.0;
        constexpr int invariance_samples = 20;
        for (int s = 0; s < invariance_samples; ++s) {
            const double t = 2.0 * static_cast<double>(s) / (invariance_samples - 1);
            worst = std::max(worst, residual(slow, solve_full(p, on_manifold, t)));
        }
        row.invariance_residual = worst;
        table.rows.push_back(row);
    }

    std::vector<std::pair<double, double>> dpts, gpts;
    for (const auto& r : table.rows) {
        dpts.emplace_back(r.eps, r.graph_distance);
        gpts.emplace_back(r.eps, r.rate_gap);
    }
    table.distance_fit = fit_rate(dpts);
    table.rate_gap_fit = fit_rate(gpts);
    return table;
}

OracleCheck oracle_crosscheck(const ExperimentConfig& cfg) {
    cfg.validate();
    const auto lat = SpectralLattice::build(cfg.dim, cfg.cutoff, cfg.dk);
    const double eps = cfg.eps_ladder.front();
    const SystemParams p = validate_params(cfg.base.with_eps(eps));
    const SpectralField v0 = build_mixture(lat, cfg.v0_spec);
    const SpectralField u0 =
        cfg.on_critical ? h0_map(v0, p) : build_mixture(lat, cfg.u0_spec);
    const SpectralPair state0{u0, v0};

    OracleCheck check;
    check.eps = eps;
    check.t = cfg.time.horizon / 4.0;
    const SpectralPair exact = solve_full(p, state0, check.t);
    const SpectralPair numeric =
        rk4_full(p, state0, check.t, OracleConfig::fitted(check.t, eps / 100.0));
    check.rel_err = h2_norm({numeric.u_hat - exact.u_hat, numeric.v_hat - exact.v_hat})
                    / std::max(h2_norm(exact), 1e-300);
    check.pass = check.rel_err <= 1e-6;
    return check;
}

EigenReport eigen_identities(const ExperimentConfig& cfg, int modes) {
    cfg.validate();
    const auto lat = SpectralLattice::build(cfg.dim, cfg.cutoff, cfg.dk);
    const SystemParams p = validate_params(cfg.base.with_eps(cfg.eps_ladder.front()));
    const DerivedConstants dc(p);
    const ManifoldLine slow = slow_manifold(p);
    const ManifoldLine fast = fast_manifold(p);

    std::mt19937_64 rng(cfg.seed);
    std::uniform_int_distribution<std::size_t> pick(0, lat->size() - 1);
    EigenReport rep;
    rep.modes = modes;
    for (int i = 0; i < modes; ++i) {
        const double q = lat->ksq(pick(rng));
        const Mat2 m = mode_matrix(p, q);
        const double mscale =
            std::max({std::abs(m.a11), std::abs(m.a12), std::abs(m.a21), std::abs(m.a22)});
        for (double lam : {dc.lambda_slow_at(q), dc.lambda_fast_at(q)}) {
            const double resid = lam * lam - m.trace() * lam + m.det();
            const double scale = lam * lam + std::abs(m.trace() * lam) + std::abs(m.det());
            rep.worst_char_residual =
                std::max(rep.worst_char_residual, std::abs(resid) / scale);
        }
        for (const auto& [line, lam] :
             {std::pair{slow, dc.lambda_slow_at(q)}, std::pair{fast, dc.lambda_fast_at(q)}}) {
            const Vec2 dir{2.0 * p.beta, line.sigma};
            const Vec2 image = m.apply(dir);
            const double scale = mscale * std::max(std::abs(dir.x), std::abs(dir.y));
            rep.worst_pairing_residual =
                std::max(rep.worst_pairing_residual,
                         std::hypot(image.x - lam * dir.x, image.y - lam * dir.y) / scale);
        }
    }
    rep.pass = rep.worst_char_residual <= 1e-10 && rep.worst_pairing_residual <= 1e-10;
    return rep;
}

ScaledVectorCheck scaled_eigenvector_limit(const ExperimentConfig& cfg) {
    cfg.validate();
    ScaledVectorCheck check;
    for (double eps : cfg.eps_ladder) {
        const SystemParams p = validate_params(cfg.base.with_eps(eps));
        check.points.emplace_back(eps, std::abs(slow_manifold(p).sigma + 2.0 * p.alpha));
    }
    check.fitted_c = check.points.back().second / check.points.back().first;
    check.fit = fit_rate(check.points);
    bool bounded = check.fitted_c > 0.0;
    for (const auto& [eps, gap] : check.points)
        bounded = bounded && gap <= check.fitted_c * eps * (1.0 + 1e-9);
    check.pass = bounded && check.fit.slope >= 0.9 && check.fit.slope <= 1.1;
    return check;
}

std::vector<SolveRow> solve_histories(const ExperimentConfig& cfg) {
    cfg.validate();
    const auto lat = SpectralLattice::build(cfg.dim, cfg.cutoff, cfg.dk);
    const auto ts = cfg.time.points();
    const SpectralField v0 = build_mixture(lat, cfg.v0_spec);

    std::vector<SolveRow> rows;
    rows.reserve(cfg.eps_ladder.size() * ts.size());
    for (double eps : cfg.eps_ladder) {
        const SystemParams p = validate_params(cfg.base.with_eps(eps));
        const SpectralField u0 =
            cfg.on_critical ? h0_map(v0, p) : build_mixture(lat, cfg.u0_spec);
        const SpectralPair state0{u0, v0};
        for (double t : ts) {
            const SpectralPair state = solve_full(p, state0, t);
            rows.push_back({eps, t, h2_norm(state.u_hat), h2_norm(state.v_hat)});
        }
    }
    return rows;
}

} // namespace fastslow
