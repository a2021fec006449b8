#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace acsel {

enum class NoiseKind { GaussianStd, StudentStandardized };

/// Unit-variance i.i.d. noise source.  Student draws are rescaled by
/// sqrt((dof-2)/dof) so their variance is one.
struct NoiseSpec {
    NoiseKind kind = NoiseKind::GaussianStd;
    int dof = 5;
    std::uint64_t seed = 0;
};

inline NoiseSpec gaussian_noise(std::uint64_t seed) {
    return {NoiseKind::GaussianStd, 0, seed};
}

inline NoiseSpec student_noise(int dof, std::uint64_t seed) {
    return {NoiseKind::StudentStandardized, dof, seed};
}

/// Draws n unit-variance noise values, fully determined by spec.seed.
inline std::vector<double> gen_noise(const NoiseSpec& spec, std::size_t n) {
    if (n == 0) throw std::invalid_argument("gen_noise: n must be >= 1");
    std::mt19937_64 rng(spec.seed);
    std::vector<double> out(n);
    if (spec.kind == NoiseKind::GaussianStd) {
        std::normal_distribution<double> dist(0.0, 1.0);
        for (auto& v : out) v = dist(rng);
    } else {
        if (spec.dof <= 2)
            throw std::invalid_argument("Student noise needs dof > 2 (finite variance)");
        const double scale = std::sqrt((spec.dof - 2.0) / spec.dof);
        std::student_t_distribution<double> dist(spec.dof);
        for (auto& v : out) v = scale * dist(rng);
    }
    return out;
}

}  // namespace acsel
