#pragma once

#include <stdexcept>

namespace surfch {

/// Regularized Landau-Lifshitz double well: the quartic (1/4)(c^2-1)^2 on
/// [-K, K], extended quadratically outside so the second derivative is
/// bounded by L = 3K^2 - 1 everywhere. C2 across the matching points.
struct PotentialParams {
    double K = 1.1;
    double lipschitz = 3 * 1.1 * 1.1 - 1; // L = 3K^2 - 1

    explicit PotentialParams(double cutoff = 1.1)
        : K(cutoff), lipschitz(3.0 * cutoff * cutoff - 1.0)
    {
        if (!(K > 1.0))
            throw std::invalid_argument("PotentialParams: K must exceed 1");
    }
};

inline double f0(double c, const PotentialParams& p)
{
    const double K = p.K;
    if (c > K)
        return 0.5 * (3 * K * K - 1) * c * c - 2 * K * K * K * c + 0.25 * (3 * K * K * K * K + 1);
    if (c < -K)
        return 0.5 * (3 * K * K - 1) * c * c + 2 * K * K * K * c + 0.25 * (3 * K * K * K * K + 1);
    const double w = c * c - 1.0;
    return 0.25 * w * w;
}

inline double df0(double c, const PotentialParams& p)
{
    const double K = p.K;
    if (c > K)
        return p.lipschitz * c - 2 * K * K * K;
    if (c < -K)
        return p.lipschitz * c + 2 * K * K * K;
    return c * c * c - c;
}

inline double ddf0(double c, const PotentialParams& p)
{
    if (c > p.K || c < -p.K)
        return p.lipschitz;
    return 3 * c * c - 1.0;
}

} // namespace surfch
