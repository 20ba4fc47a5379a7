#include "vplab/curvature.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "vplab/errors.hpp"
#include "vplab/sampling.hpp"
#include "vplab/santalo.hpp"
#include "vplab/smooth.hpp"

namespace vplab {

namespace {

// Depth of the boundary below the tangent-plane point p, measured along -N.
// Assumes the segment p - s N enters the body well before leaving it again,
// which holds for probe offsets much smaller than the body.
double boundary_depth(const ConvexBody& body, const Vec& p, const Vec& N,
                      double hint) {
    if (body.contains(p, 0.0)) return 0.0;
    double lo = 0.0;
    double hi = std::max(hint, 1e-14);
    int guard = 0;
    while (!body.contains(p - hi * N, 0.0)) {
        lo = hi;
        hi *= 2.0;
        if (++guard > 70)
            throw GeometryError("boundary probe did not reach the body");
    }
    for (int it = 0; it < 100 && (hi - lo) > 1e-17 * (1.0 + hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        (body.contains(p - mid * N, 0.0) ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

double inradius_guess(const ConvexBody& body) {
    const int n = body.dim();
    double r = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        r = std::min(r, body.radial(unit_vector(n, i)));
        r = std::min(r, body.radial(-unit_vector(n, i)));
    }
    return r;
}

// Unit directions in R^m covering the coordinate axes and diagonals first,
// then a low-discrepancy filler; each direction is used with both signs.
std::vector<Vec> tangent_directions(int m, int want) {
    std::vector<Vec> dirs;
    for (int i = 0; i < m; ++i) dirs.push_back(unit_vector(m, i));
    for (int i = 0; i < m; ++i) {
        for (int j = i + 1; j < m; ++j) {
            for (double sj : {1.0, -1.0}) {
                Vec d = Vec::Zero(m);
                d(i) = M_SQRT1_2;
                d(j) = sj * M_SQRT1_2;
                dirs.push_back(d);
            }
        }
    }
    if (m == 1) return dirs;
    Sobol sob(m, 1234, 0);
    double pt[8];
    while (static_cast<int>(dirs.size()) < want) {
        sob.next(pt);
        dirs.push_back(cube_to_sphere(pt, m));
    }
    return dirs;
}

struct QuadFit {
    Mat Q;  // fitted second fundamental form in the tangent frame
    double rms = 0.0;
};

QuadFit fit_once(const ConvexBody& body, const Vec& x0, const Vec& N,
                 const Mat& frame, double bw, int sample_points) {
    const int n = body.dim();
    const int m = n - 1;
    const int quad_terms = m * (m + 1) / 2;
    const int cols = m + quad_terms;

    static const double radii[] = {1.0, 0.75, 0.5, 0.35};
    const auto dirs = tangent_directions(m, std::max(cols, sample_points / 8));
    std::vector<Vec> offsets;  // in tangent coordinates, units of bw
    int radius_idx = 0;
    while (static_cast<int>(offsets.size()) < std::max(2 * cols + 2, sample_points)) {
        const double r = radii[radius_idx % 4];
        ++radius_idx;
        for (const Vec& d : dirs) {
            offsets.push_back(r * d);
            offsets.push_back(-r * d);
            if (static_cast<int>(offsets.size()) >=
                std::max(2 * cols + 2, sample_points))
                break;
        }
    }

    Mat A(offsets.size(), cols);
    Vec rhs(offsets.size());
    for (std::size_t k = 0; k < offsets.size(); ++k) {
        const Vec& z = offsets[k];
        Vec y = bw * z;
        const double f = boundary_depth(body, x0 + frame * y, N, 0.5 * bw * bw);
        rhs(k) = f / (bw * bw);
        int c = 0;
        for (int i = 0; i < m; ++i) A(k, c++) = z(i);
        for (int i = 0; i < m; ++i) {
            A(k, c++) = 0.5 * z(i) * z(i);
            for (int j = i + 1; j < m; ++j) A(k, c++) = z(i) * z(j);
        }
    }

    Vec sol = A.colPivHouseholderQr().solve(rhs);
    QuadFit out;
    out.rms = (A * sol - rhs).norm() / std::sqrt(double(offsets.size())) * bw * bw;

    out.Q.resize(m, m);
    int c = m;
    for (int i = 0; i < m; ++i) {
        out.Q(i, i) = sol(c++);
        for (int j = i + 1; j < m; ++j) {
            out.Q(i, j) = out.Q(j, i) = sol(c++);
        }
    }
    return out;
}

Vec eigenvalues_of(const Mat& Q) {
    return Eigen::SelfAdjointEigenSolver<Mat>(Q).eigenvalues();
}

}  // namespace

IndicatrixReport fit_indicatrix(const ConvexBody& body, const Vec& x0,
                                double bandwidth, int sample_points) {
    const int n = body.dim();
    if (n < 2) throw GeometryError("fit_indicatrix: dimension must be >= 2");
    IndicatrixReport rep;
    rep.point = x0;
    rep.normal = body.normal_at(x0);
    rep.tangent_frame = tangent_basis(rep.normal);

    double bw = bandwidth > 0.0 ? bandwidth : 1e-2 * inradius_guess(body);
    QuadFit fit = fit_once(body, x0, rep.normal, rep.tangent_frame, bw, sample_points);
    // refit when the curvature says the window was too coarse for quartic bias
    const double lmax = eigenvalues_of(fit.Q).cwiseAbs().maxCoeff();
    if (lmax * bw > 1e-2) {
        bw = 1e-2 / lmax;
        fit = fit_once(body, x0, rep.normal, rep.tangent_frame, bw, sample_points);
    }
    // the symmetric design keeps odd terms out of the quadratic block, so the
    // fit errs by C*bw^2; a second fit at bw/2 extrapolates the bias away
    QuadFit half = fit_once(body, x0, rep.normal, rep.tangent_frame, 0.5 * bw,
                            sample_points);
    Mat Q = (4.0 * half.Q - fit.Q) / 3.0;

    Eigen::SelfAdjointEigenSolver<Mat> eig(Q);
    const Vec lam = eig.eigenvalues();
    const double scale = std::max(1.0, lam.cwiseAbs().maxCoeff());
    if (lam(0) < -1e-6 * scale)
        throw ConvexityError("fit_indicatrix: indefinite second fundamental form");
    if (lam(0) < 1e-8)
        throw FlatPointError("fit_indicatrix: flat direction at the boundary point");

    rep.bandwidth = bw;
    rep.fit_rms = half.rms;
    rep.eigenvalues = lam;
    rep.eigenvectors = eig.eigenvectors();
    rep.axes_b = lam.array().rsqrt().matrix();
    rep.kappa = lam.prod();
    return rep;
}

Vec approximating_ellipsoid(const Vec& axes_b) {
    const int m = static_cast<int>(axes_b.size());
    if (m < 1) throw GeometryError("approximating_ellipsoid: empty axis list");
    double log_g = 0.0;
    for (int i = 0; i < m; ++i) {
        if (!(axes_b(i) > 0.0))
            throw GeometryError("approximating_ellipsoid: axes must be positive");
        log_g += std::log(axes_b(i));
    }
    log_g /= m;
    Vec a(m + 1);
    for (int i = 0; i < m; ++i) a(i) = axes_b(i) * std::exp(log_g);
    a(m) = std::exp(2.0 * log_g);
    return a;
}

Vec transform_normal(const Mat& T, const Vec& N) {
    Vec w = T.transpose().fullPivLu().solve(N);
    const double len = w.norm();
    if (!(len > 0.0)) throw GeometryError("transform_normal: degenerate map");
    return w / len;
}

double transform_curvature(const Mat& T, const Vec& N, double kappa_image) {
    const int n = static_cast<int>(T.rows());
    Vec w = T.transpose().fullPivLu().solve(N);
    const double det = T.determinant();
    return std::pow(w.norm(), n + 1) * det * det * kappa_image;
}

NormalizationResult normalize_at_point(const ConvexBody& body, const Vec& x0,
                                       std::uint64_t samples, std::uint64_t seed,
                                       double bandwidth, int jobs) {
    const int n = body.dim();
    const Vec N = body.normal_at(x0);
    const double d = x0.dot(N);
    if (!(d > 0.0))
        throw GeometryError("normalize_at_point: origin is not interior");

    // step 1: volume-preserving shear moving x0 onto its own normal ray
    Mat frame = tangent_basis(N);
    Mat B(n, n), C(n, n);
    B.leftCols(n - 1) = frame;
    B.col(n - 1) = x0;
    C.leftCols(n - 1) = frame;
    C.col(n - 1) = d * N;
    Mat T1 = C * B.partialPivLu().inverse();
    ConvexBody K1 = body.linear_image(T1);
    const Vec x1 = d * N;

    // step 2: tangent rebalancing to a spherical indicatrix
    IndicatrixReport fit = fit_indicatrix(K1, x1, bandwidth);
    Vec lam = fit.eigenvalues;
    // average nearly equal eigenvalues so the rebalancing is stable
    for (int i = 0; i + 1 < lam.size();) {
        int j = i + 1;
        while (j < lam.size() && lam(j) - lam(i) <= 1e-6 * lam(j)) ++j;
        const double avg = lam.segment(i, j - i).mean();
        lam.segment(i, j - i).setConstant(avg);
        i = j;
    }
    double log_mean = 0.0;
    for (int i = 0; i < lam.size(); ++i) log_mean += std::log(lam(i));
    log_mean /= static_cast<double>(lam.size());
    Mat W = fit.tangent_frame * fit.eigenvectors;  // full-space eigen directions
    Mat T2 = fit.normal * fit.normal.transpose();
    for (int i = 0; i < lam.size(); ++i) {
        const double ci = std::exp(0.5 * (std::log(lam(i)) - log_mean));
        T2 += ci * W.col(i) * W.col(i).transpose();
    }
    ConvexBody K2 = K1.linear_image(T2);
    const double lam_bar = std::exp(log_mean);

    // step 3: dilate until the volume matches the polar volume
    const double v = best_volume(K2, samples, seed, jobs).value;
    const double vp = best_volume(K2.polar_dual(Vec::Zero(n)), samples, seed + 1, jobs).value;
    const double alpha = std::pow(vp / v, 1.0 / (2.0 * n));

    // step 4: tangent/normal rebalancing putting the image point on the sphere
    const double lambda = std::pow(alpha * d, 1.0 / (n - 1.0));
    Mat P = N * N.transpose();
    Mat T3 = lambda * (Mat::Identity(n, n) - P) + std::pow(lambda, 1.0 - n) * P;

    NormalizationResult out;
    out.map = T3 * (alpha * (T2 * T1));
    out.image_point = out.map * x0;
    out.alpha = alpha;
    out.lambda = lambda;
    // curvature at the image point: lam_bar/alpha after the dilation, then the
    // tangent^2/normal rescaling of T3; the osculating radius is its inverse
    out.ball_radius = alpha * std::pow(lambda, n + 1.0) / lam_bar;
    return out;
}

NormalizationCheck certify_normalization(const ConvexBody& body,
                                         const NormalizationResult& nr,
                                         std::uint64_t samples, std::uint64_t seed,
                                         int jobs) {
    const int n = body.dim();
    ConvexBody L = body.linear_image(nr.map);
    const Vec& p = nr.image_point;

    NormalizationCheck out;
    out.point_norm_error = std::abs(p.norm() - 1.0);

    Vec Np = L.normal_at(p);
    const double cosang = std::clamp(Np.dot(p) / p.norm(), -1.0, 1.0);
    out.normal_angle = std::acos(cosang);

    IndicatrixReport fit = fit_indicatrix(L, p);
    const double lmin = fit.eigenvalues(0);
    const double lmax = fit.eigenvalues(fit.eigenvalues.size() - 1);
    out.eigen_spread = (lmax - lmin) / fit.eigenvalues.mean();

    VolumeEstimate v = best_volume(L, samples, seed, jobs);
    VolumeEstimate vp = best_volume(L.polar_dual(Vec::Zero(n)), samples, seed + 1, jobs);
    out.volume_gap = std::abs(v.value - vp.value);
    out.volume_gap_sigma = std::hypot(v.std_error, vp.std_error);
    return out;
}

EmpiricalModulus sandwich_moduli(const ConvexBody& body, const Vec& x0,
                                 const std::vector<double>& depths,
                                 int directions) {
    const int n = body.dim();
    const int m = n - 1;
    IndicatrixReport rep = fit_indicatrix(body, x0);
    const Vec a = approximating_ellipsoid(rep.axes_b);
    const double an = a(m);

    auto dirs = tangent_directions(m, directions);
    if (static_cast<int>(dirs.size()) > directions) dirs.resize(directions);

    EmpiricalModulus out;
    for (double t : depths) {
        if (!(t > 0.0) || t >= an)
            throw GeometryError("sandwich_moduli: depth out of range");
        double phi = 1.0;
        const double chord = 2.0 * t / an - (t * t) / (an * an);
        for (const Vec& d0 : dirs) {
            for (double sign : {1.0, -1.0}) {
                Vec d = sign * d0;
                // ellipsoid slice radius along d
                Vec de = rep.eigenvectors.transpose() * d;
                double s2 = 0.0;
                for (int i = 0; i < m; ++i) s2 += de(i) * de(i) / (a(i) * a(i));
                const double s_ell = std::sqrt(chord / s2);
                // body slice radius: largest s with depth(s d) <= t
                double lo = 0.0, hi = s_ell;
                auto depth_at = [&](double s) {
                    return boundary_depth(body, x0 + rep.tangent_frame * (s * d),
                                          rep.normal, t);
                };
                int guard = 0;
                while (depth_at(hi) <= t) {
                    lo = hi;
                    hi *= 1.5;
                    if (++guard > 60)
                        throw GeometryError("sandwich_moduli: slice did not close");
                }
                for (int it = 0; it < 60 && (hi - lo) > 1e-13 * hi; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    (depth_at(mid) <= t ? lo : hi) = mid;
                }
                const double s_body = 0.5 * (lo + hi);
                phi = std::max(phi, std::max(s_body / s_ell, s_ell / s_body));
            }
        }
        out.rows.push_back(ModulusRow{t, phi, 1.0, phi});
    }
    return out;
}

}  // namespace vplab
