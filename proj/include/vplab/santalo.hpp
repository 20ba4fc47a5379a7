#pragma once

#include <cstdint>

#include "vplab/body.hpp"
#include "vplab/volume.hpp"

namespace vplab {

// Centroid: exact for polytopes and for oracles that know it, otherwise an
// antithetic radial-moment estimate (pairs +-u, so centrally symmetric bodies
// come out exactly zero).
Vec centroid_estimate(const ConvexBody& body, std::uint64_t samples,
                      std::uint64_t seed, int jobs = 0);

struct VpEstimate {
    double value = 0.0;
    double std_error = 0.0;  // 0 when both factors are exact
};

// |K - z| * |(K - z)^o|; z must be interior.
VpEstimate volume_product(const ConvexBody& body, const Vec& z,
                          std::uint64_t samples, std::uint64_t seed,
                          int jobs = 0);

struct VolumeProductReport {
    double vp_at_origin = 0.0;  // NaN when the origin is not interior
    Vec santalo_point;
    double vp_at_santalo = 0.0;
    double vp_std_error = 0.0;
    double normalized_vp = 0.0;  // vp_at_santalo / kappa_n^2
    int iterations = 0;
};

// Minimize z -> |K - z| |(K - z)^o| by damped Newton steps on the polar
// centroid; the gradient is (n+1) |K^z| centroid(K^z). Uses the same seed for
// every iterate so the Monte Carlo surrogate is a fixed deterministic
// function of z.
VolumeProductReport santalo_point(const ConvexBody& body,
                                  std::uint64_t samples = 200000,
                                  std::uint64_t seed = 20240601,
                                  int jobs = 0);

}  // namespace vplab
