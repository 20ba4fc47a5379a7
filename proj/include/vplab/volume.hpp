#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "vplab/body.hpp"

namespace vplab {

enum class VolumeMethod { Exact, RadialQuadrature, Rejection };

const char* volume_method_name(VolumeMethod m);

struct VolumeEstimate {
    double value = 0.0;
    VolumeMethod method = VolumeMethod::Exact;
    double std_error = 0.0;  // 0 for exact
    std::uint64_t samples = 0;
};

// Spherical cap of a ball of radius r, cut at height (depth) delta below the
// boundary point. Valid for 0 <= delta <= 2r.
struct CapSpec {
    int n = 0;
    double r = 0.0;
    double delta = 0.0;
};

// Row of an empirical small-parameter study: measured quantity against its
// predicted leading-order term at scale t, ratio = measured / leading.
struct ModulusRow {
    double t = 0.0;
    double measured = 0.0;
    double leading = 0.0;
    double ratio = 0.0;
};

struct EmpiricalModulus {
    std::vector<ModulusRow> rows;  // t strictly decreasing toward 0
};

VolumeEstimate polytope_volume_exact(const ConvexBody& body);

// (kappa_n / N) * sum r(u_i)^n over quasi-random sphere directions.
VolumeEstimate volume_radial(const ConvexBody& body, std::uint64_t samples,
                             std::uint64_t seed, int jobs = 0);

// Hit-rate Monte Carlo against the support-function bounding box.
VolumeEstimate volume_rejection(const ConvexBody& body, std::uint64_t samples,
                                std::uint64_t seed, int jobs = 0);

// Exact when the body knows its volume, radial quadrature otherwise.
VolumeEstimate best_volume(const ConvexBody& body, std::uint64_t samples,
                           std::uint64_t seed, int jobs = 0);

double regularized_incomplete_beta(double a, double b, double x);

double spherical_cap_volume_exact(const CapSpec& cap);

// (2^{(n+1)/2} / (n+1)) kappa_{n-1} delta^{(n+1)/2} r^{(n-1)/2}
double cap_leading_term(const CapSpec& cap);

// Volume gained by conv(B u {x + delta N}) over B, for a ball of radius r:
// leading order is the cap term divided by n.
double cone_excess_leading_term(const CapSpec& cap);

double ball_cone_excess_exact(int n, double r, double delta);

// Same excess measured through the convex-body machinery: common-random-number
// difference of radial powers between the coned body and the base ball. For
// n = 3 the directions are drawn from a polar cap around the apex axis, which
// keeps the estimator variance proportional to the window actually affected.
VolumeEstimate ball_cone_excess_mc(int n, double r, double delta,
                                   std::uint64_t samples, std::uint64_t seed,
                                   int jobs = 0);

EmpiricalModulus cap_ratio_grid(int n, double r, const std::vector<double>& ts);
EmpiricalModulus cone_ratio_grid(int n, double r, const std::vector<double>& ts);

}  // namespace vplab
