#include "vplab/santalo.hpp"

#include <cmath>
#include <limits>

#include "vplab/errors.hpp"
#include "vplab/sampling.hpp"
#include "vplab/smooth.hpp"

namespace vplab {

Vec centroid_estimate(const ConvexBody& body, std::uint64_t samples,
                      std::uint64_t seed, int jobs) {
    if (auto c = body.exact_centroid()) return *c;
    const int n = body.dim();
    auto mom = sphere_map_moments(
        n, n + 1, samples, seed,
        [&](const Vec& u, double* out) {
            const double r1 = body.radial(u);
            const double r2 = body.radial(-u);
            out[0] = 0.5 * (std::pow(r1, n) + std::pow(r2, n));
            const double w = 0.5 * (std::pow(r1, n + 1) - std::pow(r2, n + 1));
            for (int i = 0; i < n; ++i) out[1 + i] = u(i) * w;
        },
        jobs);
    Vec m = mom.mean();
    if (!(m(0) > 0.0)) throw GeometryError("centroid: vanishing volume estimate");
    Vec c(n);
    for (int i = 0; i < n; ++i) c(i) = m(1 + i) / m(0);
    return (static_cast<double>(n) / (n + 1.0)) * c;
}

VpEstimate volume_product(const ConvexBody& body, const Vec& z,
                          std::uint64_t samples, std::uint64_t seed, int jobs) {
    VolumeEstimate primal = best_volume(body, samples, seed, jobs);
    ConvexBody polar = body.polar_dual(z);
    VolumeEstimate dual = best_volume(polar, samples, seed + 1, jobs);
    VpEstimate out;
    out.value = primal.value * dual.value;
    out.std_error = std::hypot(primal.value * dual.std_error,
                               dual.value * primal.std_error);
    return out;
}

namespace {

struct PolarProbe {
    double volume = 0.0;
    Vec centroid;
};

PolarProbe probe_polar(const ConvexBody& body, const Vec& z,
                       std::uint64_t samples, std::uint64_t seed, int jobs) {
    ConvexBody polar = body.polar_dual(z);
    PolarProbe p;
    p.volume = best_volume(polar, samples, seed, jobs).value;
    p.centroid = centroid_estimate(polar, samples, seed, jobs);
    return p;
}

}  // namespace

VolumeProductReport santalo_point(const ConvexBody& body, std::uint64_t samples,
                                  std::uint64_t seed, int jobs) {
    const int n = body.dim();
    const double kn = unit_ball_volume(n);
    VolumeProductReport report;

    const double primal_volume = best_volume(body, samples, seed, jobs).value;
    const double primal_scale = std::pow(primal_volume / kn, 1.0 / n);

    report.vp_at_origin = std::numeric_limits<double>::quiet_NaN();
    try {
        report.vp_at_origin =
            volume_product(body, Vec::Zero(n), samples, seed, jobs).value;
    } catch (const GeometryError&) {
        // origin not interior; the report records NaN
    }

    Vec z = centroid_estimate(body, samples, seed, jobs);
    PolarProbe cur = probe_polar(body, z, samples, seed, jobs);
    int it = 0;
    for (; it < 300; ++it) {
        const double rho = std::pow(cur.volume / kn, 1.0 / n);
        Vec step = -cur.centroid / (rho * rho);
        if (step.norm() <= 1e-11 * std::max(primal_scale, z.norm())) break;
        // backtracking on the polar volume, the monotone part of the product
        double scale = 1.0;
        bool moved = false;
        for (int bt = 0; bt < 30; ++bt) {
            Vec cand = z + scale * step;
            try {
                PolarProbe next = probe_polar(body, cand, samples, seed, jobs);
                if (next.volume < cur.volume) {
                    z = cand;
                    cur = next;
                    moved = true;
                    break;
                }
            } catch (const GeometryError&) {
                // stepped outside the body; shrink
            }
            scale *= 0.5;
        }
        if (!moved) break;
    }

    report.santalo_point = z;
    report.iterations = it;
    VpEstimate final_vp = volume_product(body, z, samples, seed, jobs);
    report.vp_at_santalo = final_vp.value;
    report.vp_std_error = final_vp.std_error;
    report.normalized_vp = report.vp_at_santalo / (kn * kn);
    return report;
}

}  // namespace vplab
