#include "vplab/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <utility>

#include "vplab/errors.hpp"
#include "vplab/hull.hpp"

namespace vplab {

namespace {

Rat rat_abs(const Rat& x) { return x < 0 ? Rat(-x) : x; }

RatVec rat_add(const RatVec& a, const RatVec& b) {
    RatVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        r[i] = a[i] + b[i];
    return r;
}

std::pair<RatVec, Rat> exact_plane(const Halfspace& h) {
    return {to_rat(h.normal), Rat(h.offset)};
}

/// Vertex enumeration for an exact halfspace system with a known interior
/// point: translate the interior point to the origin, hull the scaled
/// normals, and read the vertices off the facets of that polar hull.
std::shared_ptr<const PolytopeData> from_planes_exact(
    const std::vector<std::pair<RatVec, Rat>>& planes, const RatVec& z) {
    const std::size_t n = z.size();
    std::vector<RatVec> polar_pts;
    polar_pts.reserve(planes.size());
    for (const auto& [w, o] : planes) {
        Rat slack = o - rat_dot(w, z);
        if (slack <= 0)
            throw GeometryError("hpolytope: interior point violates a halfspace");
        RatVec p(n);
        for (std::size_t k = 0; k < n; ++k)
            p[k] = w[k] / slack;
        polar_pts.push_back(std::move(p));
    }
    std::shared_ptr<const ExactHull> polar;
    try {
        polar = std::make_shared<ExactHull>(std::move(polar_pts));
    } catch (const GeometryError&) {
        throw GeometryError("hpolytope: unbounded (facet normals not full-dimensional)");
    }
    std::vector<RatVec> vertices;
    for (const auto& f : polar->facets()) {
        if (f.offset_exact <= 0)
            throw GeometryError("hpolytope: unbounded (recession direction exists)");
        RatVec v(n);
        for (std::size_t k = 0; k < n; ++k)
            v[k] = f.normal[k] / f.offset_exact + z[k];
        vertices.push_back(std::move(v));
    }
    return build_polytope(std::move(vertices));
}

} // namespace

std::shared_ptr<const PolytopeData> build_polytope(std::vector<RatVec> vertices) {
    ExactHull hull(std::move(vertices));
    auto d = std::make_shared<PolytopeData>();
    d->n = hull.dim();
    d->vertices = hull.vertices();
    d->vertices_exact = hull.vertices_exact();
    for (const auto& f : hull.facets()) {
        d->facets.push_back(Halfspace{f.unit_normal, f.offset});
        d->facets_exact.emplace_back(f.normal, f.offset_exact);
    }
    d->volume = hull.volume();
    d->volume_exact = hull.volume_exact();
    d->centroid = hull.centroid();
    d->centroid_exact = hull.centroid_exact();
    d->interior_point = d->centroid;
    return d;
}

VPolytope::VPolytope(const std::vector<Vec>& points) {
    std::vector<RatVec> pts;
    pts.reserve(points.size());
    for (const Vec& p : points)
        pts.push_back(to_rat(p));
    d_ = build_polytope(std::move(pts));
}

VPolytope::VPolytope(std::vector<RatVec> points) { d_ = build_polytope(std::move(points)); }

HPolytope::HPolytope(const std::vector<Halfspace>& halfspaces, const Vec& interior_point) {
    if (halfspaces.empty())
        throw GeometryError("hpolytope: empty halfspace list");
    const auto n = interior_point.size();
    std::vector<std::pair<RatVec, Rat>> planes;
    std::map<RatVec, char> seen;
    for (const auto& h : halfspaces) {
        if (h.normal.size() != n)
            throw GeometryError("hpolytope: inconsistent dimensions");
        double len = h.normal.norm();
        if (!(len > 0.0))
            throw GeometryError("hpolytope: zero halfspace normal");
        if ((h.offset - h.normal.dot(interior_point)) / len < 1e-12)
            throw GeometryError("hpolytope: interior point lacks slack");
        auto [w, o] = exact_plane(h);
        // Canonical key so exact duplicates collapse to one plane.
        RatVec key(static_cast<std::size_t>(n) + 1);
        Rat scale;
        for (std::size_t k = 0; k < static_cast<std::size_t>(n); ++k)
            if (w[k] != 0) {
                scale = rat_abs(w[k]);
                break;
            }
        for (std::size_t k = 0; k < static_cast<std::size_t>(n); ++k)
            key[k] = w[k] / scale;
        key[static_cast<std::size_t>(n)] = o / scale;
        if (!seen.emplace(std::move(key), 1).second)
            continue;
        planes.emplace_back(std::move(w), std::move(o));
    }
    d_ = from_planes_exact(planes, to_rat(interior_point));
}

double polytope_support(const PolytopeData& P, const Vec& u) {
    double best = -std::numeric_limits<double>::infinity();
    for (const Vec& v : P.vertices)
        best = std::max(best, v.dot(u));
    return best;
}

double polytope_radial(const PolytopeData& P, const Vec& u) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& h : P.facets) {
        if (h.offset <= 0.0)
            throw GeometryError("radial: origin is not interior");
        double den = h.normal.dot(u);
        if (den > 0.0)
            best = std::min(best, h.offset / den);
    }
    if (!std::isfinite(best))
        throw GeometryError("radial: direction has no boundary intersection");
    return best;
}

bool polytope_contains(const PolytopeData& P, const Vec& x, double tol) {
    for (const auto& h : P.facets)
        if (h.normal.dot(x) > h.offset + tol * (1.0 + std::abs(h.offset)))
            return false;
    return true;
}

Vec polytope_normal_at(const PolytopeData& P, const Vec& x, double tol) {
    const Halfspace* hit = nullptr;
    int actives = 0;
    for (const auto& h : P.facets) {
        double gap = h.offset - h.normal.dot(x);
        if (gap > tol * (1.0 + std::abs(h.offset)))
            continue;
        if (gap < -tol * (1.0 + std::abs(h.offset)))
            throw GeometryError("normal_at: point lies outside the body");
        ++actives;
        hit = &h;
    }
    if (actives == 0)
        throw GeometryError("normal_at: point is not on the boundary");
    if (actives > 1)
        throw NonUniqueNormalError("normal_at: point lies on a ridge or vertex");
    return hit->normal;
}

std::shared_ptr<const PolytopeData> polytope_polar(const PolytopeData& P, const Vec& z) {
    for (const auto& h : P.facets)
        if (h.offset - h.normal.dot(z) < 1e-10)
            throw GeometryError("polar: center too close to the boundary");
    RatVec zr = to_rat(z);
    std::vector<RatVec> pts;
    pts.reserve(P.facets_exact.size());
    for (const auto& [w, o] : P.facets_exact) {
        Rat slack = o - rat_dot(w, zr);
        RatVec p(w.size());
        for (std::size_t k = 0; k < w.size(); ++k)
            p[k] = w[k] / slack;
        pts.push_back(std::move(p));
    }
    return build_polytope(std::move(pts));
}

std::shared_ptr<const PolytopeData> polytope_intersect(const PolytopeData& P,
                                                       const Halfspace& h) {
    auto [a, b] = exact_plane(h);
    Rat vmin;
    std::size_t argmin = 0;
    Rat vmax;
    for (std::size_t i = 0; i < P.vertices_exact.size(); ++i) {
        Rat val = rat_dot(a, P.vertices_exact[i]);
        if (i == 0 || val < vmin) {
            vmin = val;
            argmin = i;
        }
        if (i == 0 || val > vmax)
            vmax = val;
    }
    if (vmax <= b) {
        // Halfspace is redundant; the body is unchanged.
        auto copy = std::make_shared<PolytopeData>(P);
        return copy;
    }
    if (vmin >= b)
        throw GeometryError("intersect: intersection has empty interior");

    RatVec z = P.centroid_exact;
    Rat val_z = rat_dot(a, z);
    if (val_z >= b) {
        // Slide from the centroid toward the deepest vertex until strictly
        // inside the new halfspace; the open segment stays interior to P.
        Rat target = (b + vmin) / 2;
        Rat t = (val_z - target) / (val_z - vmin);
        const RatVec& v = P.vertices_exact[argmin];
        for (std::size_t k = 0; k < z.size(); ++k)
            z[k] = (1 - t) * z[k] + t * v[k];
    }
    auto planes = P.facets_exact;
    planes.emplace_back(std::move(a), std::move(b));
    return from_planes_exact(planes, z);
}

std::shared_ptr<const PolytopeData> polytope_add_point(const PolytopeData& P, const Vec& p) {
    auto pts = P.vertices_exact;
    pts.push_back(to_rat(p));
    return build_polytope(std::move(pts));
}

std::shared_ptr<const PolytopeData> polytope_translate(const PolytopeData& P, const Vec& t) {
    RatVec tr = to_rat(t);
    auto d = std::make_shared<PolytopeData>();
    d->n = P.n;
    d->vertices_exact.reserve(P.vertices_exact.size());
    for (const auto& v : P.vertices_exact)
        d->vertices_exact.push_back(rat_add(v, tr));
    d->vertices.reserve(d->vertices_exact.size());
    for (const auto& v : d->vertices_exact)
        d->vertices.push_back(to_double(v));
    for (std::size_t i = 0; i < P.facets.size(); ++i) {
        const auto& [w, o] = P.facets_exact[i];
        Rat on = o + rat_dot(w, tr);
        d->facets.push_back(
            Halfspace{P.facets[i].normal, P.facets[i].offset + P.facets[i].normal.dot(t)});
        d->facets_exact.emplace_back(w, std::move(on));
    }
    d->volume = P.volume;
    d->volume_exact = P.volume_exact;
    d->centroid_exact = rat_add(P.centroid_exact, tr);
    d->centroid = to_double(d->centroid_exact);
    d->interior_point = d->centroid;
    return d;
}

std::shared_ptr<const PolytopeData> polytope_linear_image(const PolytopeData& P, const Mat& A) {
    const std::size_t n = static_cast<std::size_t>(P.n);
    if (A.rows() != P.n || A.cols() != P.n)
        throw GeometryError("linear_image: matrix shape mismatch");
    RatMat Ar(n, RatVec(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            Ar[i][j] = Rat(A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
    if (rat_det(Ar) == 0)
        throw GeometryError("linear_image: singular matrix");
    std::vector<RatVec> pts;
    pts.reserve(P.vertices_exact.size());
    for (const auto& v : P.vertices_exact)
        pts.push_back(rat_mat_vec(Ar, v));
    return build_polytope(std::move(pts));
}

VPolytope make_cube(int n, double halfwidth) {
    Rat h(halfwidth);
    std::vector<RatVec> pts;
    pts.reserve(std::size_t(1) << n);
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        RatVec v(static_cast<std::size_t>(n));
        for (int k = 0; k < n; ++k)
            v[static_cast<std::size_t>(k)] = (mask >> k & 1u) ? h : Rat(-h);
        pts.push_back(std::move(v));
    }
    return VPolytope(std::move(pts));
}

VPolytope make_cross_polytope(int n, double radius) {
    Rat r(radius);
    std::vector<RatVec> pts;
    for (int k = 0; k < n; ++k) {
        RatVec plus(static_cast<std::size_t>(n), Rat(0));
        plus[static_cast<std::size_t>(k)] = r;
        RatVec minus(static_cast<std::size_t>(n), Rat(0));
        minus[static_cast<std::size_t>(k)] = -r;
        pts.push_back(std::move(plus));
        pts.push_back(std::move(minus));
    }
    return VPolytope(std::move(pts));
}

VPolytope make_simplex(int n) {
    std::vector<RatVec> pts;
    pts.emplace_back(static_cast<std::size_t>(n), Rat(0));
    for (int k = 0; k < n; ++k) {
        RatVec v(static_cast<std::size_t>(n), Rat(0));
        v[static_cast<std::size_t>(k)] = 1;
        pts.push_back(std::move(v));
    }
    return VPolytope(std::move(pts));
}

VPolytope make_regular_simplex(int n) {
    // Project the n+1 standard basis vectors of R^{n+1} onto the sum-zero
    // hyperplane and express them in an orthonormal basis of that hyperplane.
    Mat E = Mat::Identity(n + 1, n + 1).leftCols(n + 1);
    Vec ones = Vec::Ones(n + 1);
    Mat T = tangent_basis(ones);  // (n+1) x n
    std::vector<Vec> pts;
    for (int i = 0; i <= n; ++i) {
        Vec p = E.col(i) - ones / (n + 1);
        pts.push_back(T.transpose() * p);
    }
    return VPolytope(pts);
}

} // namespace vplab
