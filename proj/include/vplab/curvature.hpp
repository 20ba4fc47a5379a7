#pragma once

#include <cstdint>
#include <vector>

#include "vplab/body.hpp"
#include "vplab/volume.hpp"

namespace vplab {

struct IndicatrixReport {
    Vec point;          // boundary point the fit was anchored at
    Vec normal;         // outward unit normal there
    Mat tangent_frame;  // n x (n-1), orthonormal columns spanning the tangent plane
    Vec eigenvalues;    // n-1 second-fundamental-form eigenvalues, ascending
    Mat eigenvectors;   // (n-1) x (n-1) eigenvector columns in tangent coordinates
    Vec axes_b;         // indicatrix semiaxes b_i = eigenvalue_i^{-1/2}
    double kappa = 0.0;      // generalized Gauss curvature: product of eigenvalues
    double bandwidth = 0.0;  // tangent radius the final fit actually used
    double fit_rms = 0.0;    // rms residual of the quadratic fit, in units of f
};

// Least-squares fit of the boundary graph f(y) = g.y + y^t Q y / 2 over a
// tangent disc of the given radius (0 picks 1e-2 times an inradius estimate).
// The fit runs twice when the first pass shows the bandwidth is too coarse
// for the curvature found. Throws NonUniqueNormalError off smooth points,
// FlatPointError when an eigenvalue falls below 1e-8, ConvexityError when
// the fitted form is clearly indefinite.
IndicatrixReport fit_indicatrix(const ConvexBody& body, const Vec& x0,
                                double bandwidth = 0.0, int sample_points = 200);

// Semiaxes (a_1, ..., a_n) of the standard approximating ellipsoid given the
// indicatrix semiaxes (b_1, ..., b_{n-1}):
//   a_i = b_i (prod_j b_j)^{1/(n-1)},  a_n = (prod_j b_j)^{2/(n-1)}.
// It touches the body at x0 and satisfies prod(a_n / a_i^2) = kappa.
Vec approximating_ellipsoid(const Vec& axes_b);

// Outward unit normal of T(K) at T(x), given the normal N of K at x.
Vec transform_normal(const Mat& T, const Vec& N);

// Gauss curvature transported through an invertible linear map:
//   kappa_K(x) = ||T^{-t} N||^{n+1} det(T)^2 kappa_{T(K)}(T(x)).
double transform_curvature(const Mat& T, const Vec& N, double kappa_image);

struct NormalizationResult {
    Mat map;                   // the composite linear map T
    Vec image_point;           // T(x0), on the unit sphere
    double alpha = 0.0;        // volume-balancing dilation factor
    double lambda = 0.0;       // tangent stretch of the final rebalancing map
    double ball_radius = 0.0;  // spherical indicatrix radius of T(K) at T(x0)
};

// Composite linear normalization at a positive-curvature boundary point:
// after T, the image point lies on the unit sphere and is its own outward
// normal, the indicatrix there is a Euclidean sphere, and |T(K)| = |T(K)^o|.
NormalizationResult normalize_at_point(const ConvexBody& body, const Vec& x0,
                                       std::uint64_t samples = 200000,
                                       std::uint64_t seed = 20240601,
                                       double bandwidth = 0.0, int jobs = 0);

struct NormalizationCheck {
    double normal_angle = 0.0;      // radians between N(T(x0)) and T(x0)
    double eigen_spread = 0.0;      // relative eigenvalue spread of a fresh fit
    double volume_gap = 0.0;        // | |L| - |L^o| |
    double volume_gap_sigma = 0.0;  // combined standard error of that gap
    double point_norm_error = 0.0;  // | ||T(x0)|| - 1 |
};

// Re-measures the normalization postconditions with fresh probes.
NormalizationCheck certify_normalization(const ConvexBody& body,
                                         const NormalizationResult& nr,
                                         std::uint64_t samples = 200000,
                                         std::uint64_t seed = 424243,
                                         int jobs = 0);

// Two-sided comparison of boundary slices of the body against slices of the
// approximating ellipsoid at depths t below x0: for each t the smallest
// factor phi >= 1 with  E/phi <= slice <= phi E  over the sampled tangent
// directions. ratio == measured == phi(t); it tends to 1 as t -> 0.
EmpiricalModulus sandwich_moduli(const ConvexBody& body, const Vec& x0,
                                 const std::vector<double>& depths,
                                 int directions = 64);

}  // namespace vplab
