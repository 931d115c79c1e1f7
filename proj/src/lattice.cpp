#include "fastslow/lattice.hpp"

#include <cmath>
#include <sstream>

namespace fastslow {

std::shared_ptr<const SpectralLattice>
SpectralLattice::build(int dim, double cutoff, double dk, std::size_t mode_budget) {
    if (dim < 1)
        raise(errc::bad_argument, "lattice dimension must be >= 1");
    if (!(cutoff > 0.0))
        raise(errc::bad_argument, "lattice cutoff must be > 0");
    if (!(dk > 0.0))
        raise(errc::bad_argument, "lattice spacing must be > 0");
    if (dk > cutoff) {
        std::ostringstream msg;
        msg << "lattice spacing dk = " << dk << " exceeds cutoff K = " << cutoff;
        raise(errc::bad_argument, msg.str());
    }

    // Small forgiveness so cutoff/dk ratios like 8/0.01 land on the intended
    // integer despite binary rounding.
    const int half = static_cast<int>(std::floor(cutoff / dk + 1e-9));
    const std::size_t per_axis = static_cast<std::size_t>(2 * half + 1);

    std::size_t total = 1;
    for (int d = 0; d < dim; ++d) {
        if (total > mode_budget / per_axis + 1)
            raise(errc::lattice_too_large, "lattice mode count exceeds the configured budget");
        total *= per_axis;
    }
    if (total > mode_budget) {
        std::ostringstream msg;
        msg << "lattice mode count " << total << " exceeds budget " << mode_budget;
        raise(errc::lattice_too_large, msg.str());
    }

    auto lat = std::shared_ptr<SpectralLattice>(new SpectralLattice());
    lat->dim_ = dim;
    lat->cutoff_ = cutoff;
    lat->dk_ = dk;
    lat->half_modes_ = half;
    lat->weight_ = std::pow(dk, dim);
    lat->ksq_.resize(total);

    std::vector<int> idx(static_cast<std::size_t>(dim), -half);
    for (std::size_t i = 0; i < total; ++i) {
        double q = 0.0;
        for (int d = 0; d < dim; ++d) {
            const double kd = idx[static_cast<std::size_t>(d)] * dk;
            q += kd * kd;
        }
        lat->ksq_[i] = q;
        // advance multi-index, last axis fastest
        for (int d = dim - 1; d >= 0; --d) {
            auto& m = idx[static_cast<std::size_t>(d)];
            if (++m <= half) break;
            m = -half;
        }
    }
    return lat;
}

std::vector<double> SpectralLattice::wavevector(std::size_t i) const {
    std::vector<double> k(static_cast<std::size_t>(dim_));
    const std::size_t per_axis = static_cast<std::size_t>(modes_per_axis());
    for (int d = dim_ - 1; d >= 0; --d) {
        const auto digit = i % per_axis;
        k[static_cast<std::size_t>(d)] = (static_cast<int>(digit) - half_modes_) * dk_;
        i /= per_axis;
    }
    return k;
}

} // namespace fastslow
