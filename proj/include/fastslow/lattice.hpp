#pragma once

#include "fastslow/errors.hpp"

#include <cstddef>
#include <memory>
#include <vector>

namespace fastslow {

// Truncated symmetric wavenumber grid {m*dk : |m*dk| <= K}^n with
// rectangle-rule quadrature weights dk^n. Modes are ordered lexicographically
// in the integer multi-index (first axis slowest), so the reflection k -> -k
// maps index i to size()-1-i.
class SpectralLattice {
public:
    static constexpr std::size_t default_mode_budget = 1u << 22;

    static std::shared_ptr<const SpectralLattice>
    build(int dim, double cutoff, double dk, std::size_t mode_budget = default_mode_budget);

    int dim() const { return dim_; }
    double cutoff() const { return cutoff_; }
    double spacing() const { return dk_; }
    std::size_t size() const { return ksq_.size(); }
    int modes_per_axis() const { return 2 * half_modes_ + 1; }

    double weight() const { return weight_; }          // dk^n, uniform
    double ksq(std::size_t i) const { return ksq_[i]; } // |k|^2 of mode i
    std::vector<double> wavevector(std::size_t i) const;
    std::size_t conjugate_index(std::size_t i) const { return ksq_.size() - 1 - i; }

private:
    SpectralLattice() = default;

    int dim_ = 0;
    double cutoff_ = 0.0;
    double dk_ = 0.0;
    int half_modes_ = 0; // M: per-axis indices run -M..M
    double weight_ = 0.0;
    std::vector<double> ksq_;
};

using LatticePtr = std::shared_ptr<const SpectralLattice>;

} // namespace fastslow
