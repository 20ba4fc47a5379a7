#include "vplab/volume.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>

#include "vplab/errors.hpp"
#include "vplab/sampling.hpp"
#include "vplab/smooth.hpp"

namespace vplab {

namespace {

double checked_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw std::invalid_argument(std::string(what) + " must be positive");
    }
    return v;
}

}  // namespace

const char* volume_method_name(VolumeMethod m) {
    switch (m) {
        case VolumeMethod::Exact: return "exact";
        case VolumeMethod::RadialQuadrature: return "radial_quadrature";
        case VolumeMethod::Rejection: return "rejection";
    }
    return "unknown";
}

VolumeEstimate polytope_volume_exact(const ConvexBody& body) {
    if (!body.is_polytope()) {
        throw GeometryError("polytope_volume_exact: body is not a polytope");
    }
    VolumeEstimate est;
    est.value = body.polytope_data()->volume;
    est.method = VolumeMethod::Exact;
    return est;
}

VolumeEstimate volume_radial(const ConvexBody& body, std::uint64_t samples,
                             std::uint64_t seed, int jobs) {
    const int n = body.dim();
    const double kn = unit_ball_volume(n);
    // Accumulate plain r^n and scale by kappa_n once at the end, so that a
    // constant radial profile (a ball) yields the closed-form volume exactly.
    auto mom = sphere_map_moments(
        n, 1, samples, seed,
        [&](const Vec& u, double* out) {
            out[0] = std::pow(body.radial(u), n);
        },
        jobs);
    VolumeEstimate est;
    est.method = VolumeMethod::RadialQuadrature;
    est.samples = samples;
    est.value = kn * mom.mean()(0);
    double var = mom.cov_of_mean()(0, 0);
    est.std_error = kn * std::sqrt(std::max(0.0, var));
    return est;
}

VolumeEstimate volume_rejection(const ConvexBody& body, std::uint64_t samples,
                                std::uint64_t seed, int jobs) {
    const int n = body.dim();
    Vec lo(n), hi(n);
    double box_volume = 1.0;
    for (int i = 0; i < n; ++i) {
        Vec e = unit_vector(n, i);
        hi(i) = body.support(e);
        lo(i) = -body.support(-e);
        if (!(hi(i) > lo(i))) {
            throw GeometryError("volume_rejection: degenerate bounding box");
        }
        box_volume *= hi(i) - lo(i);
    }

    const std::uint64_t shards = (samples + kShardSize - 1) / kShardSize;
    std::vector<std::uint64_t> hits(shards, 0);
    run_shards(shards, jobs, [&](std::uint64_t s) {
        Sobol sob(n, seed, s);
        std::uint64_t lot =
            std::min(kShardSize, samples - s * kShardSize);
        double pt[8];
        Vec p(n);
        std::uint64_t h = 0;
        for (std::uint64_t i = 0; i < lot; ++i) {
            sob.next(pt);
            for (int j = 0; j < n; ++j) {
                p(j) = lo(j) + (hi(j) - lo(j)) * pt[j];
            }
            if (body.contains(p, 0.0)) ++h;
        }
        hits[s] = h;
    });

    std::uint64_t total = 0;
    for (std::uint64_t h : hits) total += h;
    const double phat = static_cast<double>(total) / static_cast<double>(samples);
    VolumeEstimate est;
    est.method = VolumeMethod::Rejection;
    est.samples = samples;
    est.value = box_volume * phat;
    est.std_error =
        box_volume * std::sqrt(phat * (1.0 - phat) / static_cast<double>(samples));
    return est;
}

VolumeEstimate best_volume(const ConvexBody& body, std::uint64_t samples,
                           std::uint64_t seed, int jobs) {
    if (auto exact = body.exact_volume()) {
        VolumeEstimate est;
        est.value = *exact;
        est.method = VolumeMethod::Exact;
        return est;
    }
    return volume_radial(body, samples, seed, jobs);
}

double regularized_incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) {
        throw std::invalid_argument("regularized_incomplete_beta: a, b must be positive");
    }
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    // Continued fraction (modified Lentz); converges fastest for
    // x < (a+1)/(a+b+2), use the symmetry I_x(a,b) = 1 - I_{1-x}(b,a) otherwise.
    if (x > (a + 1.0) / (a + b + 2.0)) {
        return 1.0 - regularized_incomplete_beta(b, a, 1.0 - x);
    }
    const double ln_front = a * std::log(x) + b * std::log1p(-x) -
                            std::log(a) -
                            (std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
    const double tiny = 1e-300;
    double c = 1.0;
    double d = 1.0 - (a + b) * x / (a + 1.0);
    if (std::fabs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double f = d;
    for (int m = 1; m <= 300; ++m) {
        const double dm = static_cast<double>(m);
        double num = dm * (b - dm) * x / ((a + 2.0 * dm - 1.0) * (a + 2.0 * dm));
        d = 1.0 + num * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + num / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        f *= d * c;
        num = -(a + dm) * (a + b + dm) * x /
              ((a + 2.0 * dm) * (a + 2.0 * dm + 1.0));
        d = 1.0 + num * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + num / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        f *= delta;
        if (std::fabs(delta - 1.0) < 1e-16) break;
    }
    return std::exp(ln_front) * f;
}

double spherical_cap_volume_exact(const CapSpec& cap) {
    if (cap.n < 1) throw std::invalid_argument("cap dimension must be >= 1");
    checked_positive(cap.r, "cap radius");
    if (cap.delta < 0.0) throw std::invalid_argument("cap height must be >= 0");
    const double full = unit_ball_volume(cap.n) * std::pow(cap.r, cap.n);
    if (cap.delta == 0.0) return 0.0;
    if (cap.delta >= 2.0 * cap.r) return full;
    const double h = cap.delta;
    if (h > cap.r) {
        CapSpec comp{cap.n, cap.r, 2.0 * cap.r - h};
        return full - spherical_cap_volume_exact(comp);
    }
    const double x = (2.0 * cap.r * h - h * h) / (cap.r * cap.r);
    const double ix =
        regularized_incomplete_beta((cap.n + 1) / 2.0, 0.5, x);
    return 0.5 * full * ix;
}

double cap_leading_term(const CapSpec& cap) {
    checked_positive(cap.r, "cap radius");
    checked_positive(cap.delta, "cap height");
    const int n = cap.n;
    const double log_term = 0.5 * (n + 1) * std::log(2.0 * cap.delta) +
                            0.5 * (n - 1) * std::log(cap.r);
    return unit_ball_volume(n - 1) / (n + 1) * std::exp(log_term);
}

double cone_excess_leading_term(const CapSpec& cap) {
    return cap_leading_term(cap) / cap.n;
}

double ball_cone_excess_exact(int n, double r, double delta) {
    if (n < 2) throw std::invalid_argument("cone excess needs n >= 2");
    checked_positive(r, "ball radius");
    checked_positive(delta, "apex height");
    if (n == 2) {
        // Excess area is r^2 (l - atan l) with l = tan of the tangency angle.
        // The series form avoids the cancellation of the two O(l) terms.
        const double d = delta / r;
        const double l = std::sqrt(d * (2.0 + d));
        double val;
        if (l < 0.5) {
            const double lsq = l * l;
            double power = l * lsq;
            double sum = power / 3.0;
            for (int k = 2; k < 200; ++k) {
                power *= -lsq;
                const double add = power / (2.0 * k + 1.0);
                sum += add;
                if (std::fabs(add) < 1e-18 * std::fabs(sum)) break;
            }
            val = sum;
        } else {
            val = l - std::atan(l);
        }
        return r * r * val;
    }
    // Tangent cone from apex at distance r + delta: tangency circle sits at
    // height c with radius s; the added volume is the cone over that disc
    // minus the spherical cap above it.
    const double c = r * r / (r + delta);
    const double s = std::sqrt((r - c) * (r + c));
    const double cone =
        unit_ball_volume(n - 1) * std::pow(s, n - 1) * (r + delta - c) / n;
    const double cap = spherical_cap_volume_exact(CapSpec{n, r, r - c});
    return cone - cap;
}

VolumeEstimate ball_cone_excess_mc(int n, double r, double delta,
                                   std::uint64_t samples, std::uint64_t seed,
                                   int jobs) {
    checked_positive(r, "ball radius");
    checked_positive(delta, "apex height");
    ConvexBody ball = ConvexBody::smooth(EllipsoidOracle::ball(n, r));
    Vec apex = (r + delta) * unit_vector(n, n - 1);
    ConvexBody coned = ball.with_point(apex);
    const double kn = unit_ball_volume(n);
    const double rn = std::pow(r, n);

    VolumeEstimate est;
    est.method = VolumeMethod::RadialQuadrature;
    est.samples = samples;

    if (n == 3) {
        // The coned body differs from the ball only inside the tangency
        // window around the axis. Sampling the polar angle uniformly in
        // cos(theta) is exact for S^2, so restrict to a cap slightly wider
        // than the window and weight by its area fraction.
        const double cos_window = r / (r + delta);
        const double t0 = std::max(-1.0, 1.0 - 2.6 * (1.0 - cos_window));
        const double weight = 0.5 * (1.0 - t0);
        const std::uint64_t shards = (samples + kShardSize - 1) / kShardSize;
        std::vector<VectorMoments> parts(shards);
        run_shards(shards, jobs, [&](std::uint64_t sh) {
            Sobol sob(2, seed, sh);
            std::uint64_t lot = std::min(kShardSize, samples - sh * kShardSize);
            VectorMoments m;
            m.sum = Vec::Zero(1);
            m.sum_outer = Mat::Zero(1, 1);
            double pt[2];
            Vec u(3);
            for (std::uint64_t i = 0; i < lot; ++i) {
                sob.next(pt);
                const double t = t0 + (1.0 - t0) * pt[0];
                const double phi = 2.0 * M_PI * pt[1];
                const double sn = std::sqrt(std::max(0.0, 1.0 - t * t));
                u << sn * std::cos(phi), sn * std::sin(phi), t;
                const double rc = coned.radial(u);
                const double diff = rc * rc * rc - rn;
                m.sum(0) += diff;
                m.sum_outer(0, 0) += diff * diff;
                ++m.count;
            }
            parts[sh] = m;
        });
        VectorMoments total;
        total.sum = Vec::Zero(1);
        total.sum_outer = Mat::Zero(1, 1);
        for (const auto& m : parts) {
            total.sum += m.sum;
            total.sum_outer += m.sum_outer;
            total.count += m.count;
        }
        est.value = kn * weight * total.mean()(0);
        est.std_error =
            kn * weight * std::sqrt(std::max(0.0, total.cov_of_mean()(0, 0)));
        return est;
    }

    auto mom = sphere_map_moments(
        n, 1, samples, seed,
        [&](const Vec& u, double* out) {
            const double rc = coned.radial(u);
            out[0] = std::pow(rc, n) - rn;
        },
        jobs);
    est.value = kn * mom.mean()(0);
    est.std_error = kn * std::sqrt(std::max(0.0, mom.cov_of_mean()(0, 0)));
    return est;
}

EmpiricalModulus cap_ratio_grid(int n, double r, const std::vector<double>& ts) {
    EmpiricalModulus out;
    for (double t : ts) {
        CapSpec cap{n, r, t * r};
        ModulusRow row;
        row.t = t;
        row.measured = spherical_cap_volume_exact(cap);
        row.leading = cap_leading_term(cap);
        row.ratio = row.measured / row.leading;
        out.rows.push_back(row);
    }
    return out;
}

EmpiricalModulus cone_ratio_grid(int n, double r, const std::vector<double>& ts) {
    EmpiricalModulus out;
    for (double t : ts) {
        CapSpec cap{n, r, t * r};
        ModulusRow row;
        row.t = t;
        row.measured = ball_cone_excess_exact(n, r, t * r);
        row.leading = cone_excess_leading_term(cap);
        row.ratio = row.measured / row.leading;
        out.rows.push_back(row);
    }
    return out;
}

}  // namespace vplab
