#include "vplab/perturb.hpp"

#include <algorithm>
#include <cmath>

#include "vplab/curvature.hpp"
#include "vplab/errors.hpp"
#include "vplab/sampling.hpp"
#include "vplab/smooth.hpp"

namespace vplab {

namespace {

Vec zero(int n) { return Vec::Zero(n); }

std::vector<Vec> sphere_directions(int n, int count, std::uint64_t seed) {
    std::vector<Vec> dirs;
    dirs.reserve(count);
    Sobol sob(n, seed, 0);
    double pt[8];
    for (int i = 0; i < count; ++i) {
        sob.next(pt);
        dirs.push_back(cube_to_sphere(pt, n));
    }
    return dirs;
}

// largest s >= 0 with base + s * step inside the body
double ray_extent(const ConvexBody& body, const Vec& base, const Vec& step) {
    if (!body.contains(base, 0.0)) return 0.0;
    double lo = 0.0, hi = 1e-9;
    int guard = 0;
    while (body.contains(base + hi * step, 0.0)) {
        lo = hi;
        hi *= 2.0;
        if (++guard > 80) throw GeometryError("ray_extent: unbounded ray");
    }
    for (int it = 0; it < 90 && hi - lo > 1e-15 * (1.0 + hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        (body.contains(base + mid * step, 0.0) ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

Perturbation make_perturbation(const ConvexBody& body, const Vec& x,
                               double delta, PerturbKind kind) {
    if (!(delta >= 0.0))
        throw GeometryError("perturbation height must be nonnegative");
    const double len = x.norm();
    if (!(len > 0.0))
        throw GeometryError("perturbation point must be a boundary point");
    const double r = body.radial(x / len);
    if (std::abs(r - len) > 1e-9 * std::max(1.0, len))
        throw GeometryError("perturbation point is not on the boundary");
    Perturbation p;
    p.x = x;
    p.N = body.normal_at(x);
    p.delta = delta;
    p.kind = kind;
    if (kind == PerturbKind::CapCut) {
        // the slab of K along N is [-h(-N), h(N)]; the cut plane must stay
        // strictly above its floor
        const double floor = -body.support(-p.N);
        if (!(x.dot(p.N) - delta > floor))
            throw GeometryError("cap cut would remove the whole body");
    }
    return p;
}

ConvexBody cap_cut(const ConvexBody& body, const Perturbation& p) {
    if (p.kind != PerturbKind::CapCut)
        throw GeometryError("cap_cut: perturbation kind mismatch");
    if (p.delta == 0.0) return body;
    return body.intersect_halfspace({p.N, p.x.dot(p.N) - p.delta});
}

ConvexBody cap_cut(const ConvexBody& body, const Vec& x, double delta) {
    return cap_cut(body, make_perturbation(body, x, delta, PerturbKind::CapCut));
}

ConvexBody cone_add(const ConvexBody& body, const Perturbation& p) {
    if (p.kind != PerturbKind::ConeAdd)
        throw GeometryError("cone_add: perturbation kind mismatch");
    if (p.delta == 0.0) return body;
    return body.with_point(p.x + p.delta * p.N);
}

ConvexBody cone_add(const ConvexBody& body, const Vec& x, double delta) {
    return cone_add(body, make_perturbation(body, x, delta, PerturbKind::ConeAdd));
}

double dual_of_cap_identity(const ConvexBody& normalized, const Vec& x,
                            double delta, int directions) {
    if (!(delta >= 0.0 && delta < 1.0))
        throw GeometryError("dual_of_cap_identity: delta must lie in [0, 1)");
    const int n = normalized.dim();
    ConvexBody lhs = cap_cut(normalized, x, delta).polar_dual(zero(n));
    ConvexBody polar = normalized.polar_dual(zero(n));
    ConvexBody rhs = cone_add(polar, x, delta / (1.0 - delta));
    double worst = 0.0;
    for (const Vec& u : sphere_directions(n, directions, 424242)) {
        worst = std::max(worst, std::abs(lhs.support(u) - rhs.support(u)));
    }
    return worst;
}

double dual_cap_radius(double r, double eps, double delta_polar) {
    const double a = r - eps;
    if (!(a > 0.0)) throw GeometryError("dual_cap_radius: need eps < r");
    const double radicand =
        (2.0 / a) * delta_polar + ((1.0 - 2.0 * a) / (a * a)) * delta_polar * delta_polar;
    if (radicand < 0.0)
        throw GeometryError("dual_cap_radius: negative radicand");
    return std::sqrt(radicand);
}

double dual_cap_comparator(double r, double eps, double delta_polar) {
    const double a = r - 2.0 * eps;
    if (!(a > 0.0)) throw GeometryError("dual_cap_comparator: need 2 eps < r");
    const double radicand = 2.0 * delta_polar / a - delta_polar * delta_polar;
    if (radicand < 0.0)
        throw GeometryError("dual_cap_comparator: negative radicand");
    return std::sqrt(radicand);
}

double dual_cap_admissible_delta(double r, double eps) {
    if (!(eps >= 0.0 && 2.0 * eps < r))
        throw GeometryError("dual_cap_admissible_delta: need 0 <= 2 eps < r");
    const double a = r - 2.0 * eps;
    return std::min(2.0 * eps / (a * (r - eps)), 2.0 * eps / (a * (2.0 + r - eps)));
}

double dual_cap_sandwich_check(const ConvexBody& normalized, const Vec& x,
                               double r, double eps, int slice_directions,
                               int heights) {
    const int n = normalized.dim();
    if (!(eps > 0.0 && eps < std::min(r, 1.0 / r)))
        throw GeometryError("dual_cap_sandwich_check: need 0 < eps < min(r, 1/r)");

    // the point must carry a spherical indicatrix of curvature radius r
    const IndicatrixReport fit = fit_indicatrix(normalized, x);
    for (int i = 0; i < fit.eigenvalues.size(); ++i) {
        if (std::abs(fit.eigenvalues(i) * r - 1.0) > 1e-2)
            throw GeometryError(
                "dual_cap_sandwich_check: indicatrix is not a ball of radius r");
    }
    const ConvexBody polar = normalized.polar_dual(zero(n));
    const Vec N = polar.normal_at(x);
    const Mat frame = tangent_basis(N);

    const double r_in = 1.0 / r - eps;
    const double r_out = 1.0 / r + eps;

    std::vector<Vec> slice_dirs;
    if (n == 2) {
        slice_dirs.push_back(frame.col(0));
        slice_dirs.push_back(-frame.col(0));
    } else {
        Sobol sob(n - 1, 777, 0);
        double pt[8];
        for (int i = 0; i < slice_directions; ++i) {
            sob.next(pt);
            slice_dirs.push_back(frame * cube_to_sphere(pt, n - 1));
        }
    }

    const auto holds_at = [&](double depth) -> bool {
        for (int j = 1; j <= heights; ++j) {
            const double t = depth * j / heights;
            const Vec base = x - t * N;
            if (!polar.contains(base, 1e-12)) return false;
            // slice radii of the tangent balls at depth t; an empty inner
            // slice imposes no lower constraint
            const double s_in =
                t < 2.0 * r_in ? std::sqrt(t * (2.0 * r_in - t)) : 0.0;
            const double s_out =
                t < 2.0 * r_out ? std::sqrt(t * (2.0 * r_out - t)) : 0.0;
            if (t >= 2.0 * r_out) return false;
            for (const Vec& w : slice_dirs) {
                const double s = ray_extent(polar, base, w);
                if (s + 1e-10 < s_in) return false;
                if (s > s_out + 1e-10) return false;
            }
        }
        return true;
    };

    double hi = r_in;  // beyond the inner ball's midplane nothing more is won
    if (holds_at(hi)) return hi;
    double lo = 1e-6;
    if (!holds_at(lo))
        throw InconclusiveError(
            "dual_cap_sandwich_check: inclusion failed at every tested depth");
    for (int it = 0; it < 40 && hi - lo > 1e-4 * hi; ++it) {
        const double mid = std::sqrt(lo * hi);
        (holds_at(mid) ? lo : hi) = mid;
    }
    return lo;
}

const char* winner_name(Winner w) {
    switch (w) {
        case Winner::Cap: return "cap";
        case Winner::Cone: return "cone";
        case Winner::Both: return "both";
        default: return "neither";
    }
}

TheoremRow theorem_inequalities(double vol_k, double vol_k_polar, double r,
                                double eps, double delta, int n) {
    TheoremRow row;
    row.delta = delta;
    const double e = 0.5 * (n - 1);
    const double bracket1 = (n + 1) * std::pow(1.0 + r * eps, e) * (1.0 + eps) -
                            n * std::pow(1.0 - r * eps, e) * (1.0 - eps);
    row.ineq1_lhs = vol_k * bracket1;
    row.ineq1_rhs =
        n * vol_k_polar * std::pow(r, n - 1) * std::pow(1.0 - eps / r, e);
    const double bracket2 = (n + 1) * std::pow(1.0 + eps / r, e) * (1.0 + eps) -
                            n * std::pow(1.0 - eps / r, e) * (1.0 - eps);
    row.ineq2_lhs = vol_k_polar * bracket2;
    row.ineq2_rhs =
        n * vol_k * std::pow(r, -(n - 1)) * std::pow(1.0 - r * eps, e);
    const bool cap_ok = row.ineq1_lhs < row.ineq1_rhs;
    const bool cone_ok = row.ineq2_lhs < row.ineq2_rhs;
    row.winner = cap_ok ? (cone_ok ? Winner::Both : Winner::Cap)
                        : (cone_ok ? Winner::Cone : Winner::Neither);
    row.contradiction_bound = 4.0 >= double(n) * double(n);
    return row;
}

namespace {

bool is_unit_ball(const ConvexBody& body) {
    if (body.kind() != BodyKind::Smooth) return false;
    auto ell = std::dynamic_pointer_cast<const EllipsoidOracle>(body.smooth_oracle());
    if (!ell) return false;
    const int n = ell->dim();
    if (ell->center().norm() != 0.0) return false;
    return (ell->quadratic_form() - Mat::Identity(n, n)).cwiseAbs().maxCoeff() <
           1e-14;
}

void fit_decrease_law(TheoremDiagnostics& diag) {
    std::vector<double> lx, ly;
    const double target = 0.5 * (diag.n + 1);
    double const_acc = 0.0;
    for (const TheoremRow& row : diag.rows) {
        if (!(row.decrease > 0.0)) continue;
        lx.push_back(std::log(row.delta));
        ly.push_back(std::log(row.decrease));
        const_acc += std::log(row.decrease) - target * std::log(row.delta);
    }
    const int m = static_cast<int>(lx.size());
    if (m >= 1) diag.fitted_constant = std::exp(const_acc / m);
    if (m < 2) return;
    double mx = 0.0, my = 0.0;
    for (int i = 0; i < m; ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= m;
    my /= m;
    double sxx = 0.0, sxy = 0.0;
    for (int i = 0; i < m; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    diag.fitted_exponent = sxy / sxx;
}

}  // namespace

TheoremDiagnostics verify_theorem(const ConvexBody& normalized, const Vec& x0,
                                  const std::vector<double>& delta_grid,
                                  double eps_diag, std::uint64_t samples,
                                  std::uint64_t seed, int jobs,
                                  bool allow_exact) {
    const int n = normalized.dim();
    TheoremDiagnostics diag;
    diag.n = n;
    const double kappa = unit_ball_volume(n);

    if (allow_exact && is_unit_ball(normalized)) {
        diag.exact_path = true;
        diag.vp_base = kappa * kappa;
        diag.vp_base_stderr = 0.0;
        for (double d : delta_grid) {
            TheoremRow row = theorem_inequalities(kappa, kappa, 1.0, eps_diag, d, n);
            row.vp_cap = (kappa - spherical_cap_volume_exact({n, 1.0, d})) *
                         (kappa + ball_cone_excess_exact(n, 1.0, d / (1.0 - d)));
            row.vp_cone = (kappa + ball_cone_excess_exact(n, 1.0, d)) *
                          (kappa - spherical_cap_volume_exact({n, 1.0, d / (1.0 + d)}));
            row.decrease = diag.vp_base - std::min(row.vp_cap, row.vp_cone);
            const bool cap_dec = row.vp_cap < diag.vp_base;
            const bool cone_dec = row.vp_cone < diag.vp_base;
            row.winner = cap_dec ? (cone_dec ? Winner::Both : Winner::Cap)
                                 : (cone_dec ? Winner::Cone : Winner::Neither);
            diag.rows.push_back(row);
        }
        diag.all_decrease = true;
        for (const TheoremRow& row : diag.rows)
            diag.all_decrease = diag.all_decrease && row.winner != Winner::Neither;
        fit_decrease_law(diag);
        return diag;
    }

    const ConvexBody polar = normalized.polar_dual(zero(n));
    bool first = true;
    for (double d : delta_grid) {
        const ConvexBody k_cap = cap_cut(normalized, x0, d);
        const ConvexBody k_cap_polar = k_cap.polar_dual(zero(n));
        const ConvexBody k_cone = cone_add(normalized, x0, d);
        const ConvexBody k_cone_polar = k_cone.polar_dual(zero(n));

        const auto fn = [&](const Vec& u, double* out) {
            out[0] = std::pow(normalized.radial(u), n);
            out[1] = std::pow(polar.radial(u), n);
            out[2] = std::pow(k_cap.radial(u), n);
            out[3] = std::pow(k_cap_polar.radial(u), n);
            out[4] = std::pow(k_cone.radial(u), n);
            out[5] = std::pow(k_cone_polar.radial(u), n);
        };
        const VectorMoments mom = sphere_map_moments(n, 6, samples, seed, fn, jobs);
        const Vec m = mom.mean();
        const Mat S = mom.cov_of_mean();
        const double k2 = kappa * kappa;

        const auto vp_of = [&](int i, int j, double& se) {
            se = k2 * std::sqrt(std::max(0.0, m(j) * m(j) * S(i, i) +
                                                  m(i) * m(i) * S(j, j) +
                                                  2.0 * m(i) * m(j) * S(i, j)));
            return k2 * m(i) * m(j);
        };
        const auto diff_se = [&](int i, int j) {
            Vec g = Vec::Zero(6);
            g(0) = m(1);
            g(1) = m(0);
            g(i) = -m(j);
            g(j) = -m(i);
            g *= k2;
            return std::sqrt(std::max(0.0, double(g.transpose() * S * g)));
        };

        if (first) {
            double se_base = 0.0;
            diag.vp_base = vp_of(0, 1, se_base);
            diag.vp_base_stderr = se_base;
            first = false;
        }

        TheoremRow row = theorem_inequalities(
            kappa * m(0), kappa * m(1), 1.0, eps_diag, d, n);
        row.vp_cap = vp_of(2, 3, row.vp_cap_stderr);
        row.vp_cone = vp_of(4, 5, row.vp_cone_stderr);
        const double dec_cap = diag.vp_base - row.vp_cap;
        const double dec_cone = diag.vp_base - row.vp_cone;
        const double se_cap = diff_se(2, 3);
        const double se_cone = diff_se(4, 5);
        const bool cap_dec = dec_cap > 4.0 * se_cap;
        const bool cone_dec = dec_cone > 4.0 * se_cone;
        row.winner = cap_dec ? (cone_dec ? Winner::Both : Winner::Cap)
                             : (cone_dec ? Winner::Cone : Winner::Neither);
        if (dec_cap >= dec_cone) {
            row.decrease = dec_cap;
            row.decrease_stderr = se_cap;
        } else {
            row.decrease = dec_cone;
            row.decrease_stderr = se_cone;
        }
        diag.rows.push_back(row);
    }

    diag.all_decrease = !diag.rows.empty();
    bool any_resolved = false;
    for (const TheoremRow& row : diag.rows) {
        diag.all_decrease = diag.all_decrease && row.winner != Winner::Neither;
        any_resolved = any_resolved || row.winner != Winner::Neither;
    }
    if (!any_resolved)
        throw InconclusiveError(
            "verify_theorem: volume noise exceeds the signal at every delta");
    fit_decrease_law(diag);
    return diag;
}

} // namespace vplab
