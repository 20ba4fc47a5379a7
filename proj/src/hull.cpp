#include "vplab/hull.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <utility>

#include "vplab/errors.hpp"

namespace vplab {

namespace {

// Simplicial facet used during construction. The double copy of the
// hyperplane is a filter: the exact test only runs when the floating-point
// distance is too close to zero to be trusted.
struct SFacet {
    std::vector<int> verts;  // n point indices
    RatVec normal;           // exact outward normal (unnormalized)
    Rat offset;
    Vec nd;                  // unit normal, rounded
    double od = 0.0;
    bool alive = true;
};

Rat rat_abs(const Rat& x) { return x < 0 ? Rat(-x) : x; }

// Exact normal of the hyperplane through n points, via cofactor expansion of
// the (n-1) x n difference matrix.
RatVec hyperplane_normal(const std::vector<RatVec>& pts, const std::vector<int>& ids) {
    const std::size_t n = pts[static_cast<std::size_t>(ids[0])].size();
    RatMat rows(n - 1, RatVec(n));
    for (std::size_t i = 0; i + 1 < n; ++i)
        rows[i] = rat_sub(pts[static_cast<std::size_t>(ids[i + 1])],
                          pts[static_cast<std::size_t>(ids[0])]);
    RatVec normal(n);
    for (std::size_t j = 0; j < n; ++j) {
        RatMat minor(n - 1, RatVec(n - 1));
        for (std::size_t r = 0; r + 1 < n; ++r) {
            std::size_t c = 0;
            for (std::size_t k = 0; k < n; ++k) {
                if (k == j)
                    continue;
                minor[r][c++] = rows[r][k];
            }
        }
        Rat d = rat_det(std::move(minor));
        normal[j] = (j % 2 == 0) ? d : Rat(-d);
    }
    return normal;
}

void fill_double_cache(SFacet& f) {
    // Normalize in rationals by the largest magnitude before rounding so the
    // double cache cannot overflow for extreme cofactor magnitudes.
    Rat maxabs = 0;
    for (const Rat& c : f.normal)
        maxabs = std::max(maxabs, rat_abs(c));
    const std::size_t n = f.normal.size();
    Vec nd(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i)
        nd[static_cast<Eigen::Index>(i)] = static_cast<double>(f.normal[i] / maxabs);
    double len = nd.norm();
    f.nd = nd / len;
    f.od = static_cast<double>(f.offset / maxabs) / len;
}

// Sign of <facet normal, p> - offset: +1 strictly outside (visible).
int side_of(const SFacet& f, const RatVec& p, const Vec& pd) {
    double acc = -f.od;
    double mag = std::abs(f.od);
    for (Eigen::Index i = 0; i < pd.size(); ++i) {
        double t = f.nd[i] * pd[i];
        acc += t;
        mag += std::abs(t);
    }
    const double bound = 1e-12 * (static_cast<double>(pd.size()) + 2.0) * mag;
    if (std::abs(acc) > bound)
        return acc > 0.0 ? 1 : -1;
    Rat exact = rat_dot(f.normal, p) - f.offset;
    if (exact == 0)
        return 0;
    return exact > 0 ? 1 : -1;
}

} // namespace

ExactHull::ExactHull(const std::vector<Vec>& points) {
    std::vector<RatVec> pts;
    pts.reserve(points.size());
    for (const Vec& p : points)
        pts.push_back(to_rat(p));
    build(std::move(pts));
}

ExactHull::ExactHull(std::vector<RatVec> points) { build(std::move(points)); }

void ExactHull::build(std::vector<RatVec> pts_in) {
    if (pts_in.empty())
        throw GeometryError("hull: empty point set");
    n_ = static_cast<int>(pts_in[0].size());
    if (n_ < 2 || n_ > 6)
        throw GeometryError("hull: dimension must be between 2 and 6");
    const std::size_t n = static_cast<std::size_t>(n_);

    // Exact dedupe.
    std::vector<RatVec> pts;
    {
        std::map<RatVec, int> seen;
        for (auto& p : pts_in) {
            if (p.size() != n)
                throw GeometryError("hull: inconsistent point dimensions");
            if (seen.emplace(p, 1).second)
                pts.push_back(std::move(p));
        }
    }
    std::vector<Vec> pts_d(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i)
        pts_d[i] = to_double(pts[i]);

    // Greedy affinely independent seed simplex.
    std::vector<int> seed{0};
    for (std::size_t i = 1; i < pts.size() && seed.size() < n + 1; ++i) {
        RatMat diffs;
        for (std::size_t k = 1; k < seed.size(); ++k)
            diffs.push_back(rat_sub(pts[static_cast<std::size_t>(seed[k])], pts[0]));
        diffs.push_back(rat_sub(pts[i], pts[0]));
        if (rat_rank(std::move(diffs)) == static_cast<int>(seed.size()))
            seed.push_back(static_cast<int>(i));
    }
    if (seed.size() < n + 1)
        throw GeometryError("hull: input is not full-dimensional");

    // Interior reference point, fixed for the whole run: average of the seed.
    RatVec ref(n, Rat(0));
    for (int id : seed)
        for (std::size_t k = 0; k < n; ++k)
            ref[k] += pts[static_cast<std::size_t>(id)][k];
    for (std::size_t k = 0; k < n; ++k)
        ref[k] /= static_cast<int>(n + 1);

    auto make_facet = [&](std::vector<int> vids) -> SFacet {
        SFacet f;
        std::sort(vids.begin(), vids.end());
        f.normal = hyperplane_normal(pts, vids);
        bool zero = true;
        for (const Rat& c : f.normal)
            if (c != 0) {
                zero = false;
                break;
            }
        if (zero)
            throw GeometryError("hull: degenerate facet");
        f.offset = rat_dot(f.normal, pts[static_cast<std::size_t>(vids[0])]);
        Rat side = rat_dot(f.normal, ref) - f.offset;
        if (side == 0)
            throw GeometryError("hull: reference point on facet plane");
        if (side > 0) {
            for (Rat& c : f.normal)
                c = -c;
            f.offset = -f.offset;
        }
        f.verts = std::move(vids);
        fill_double_cache(f);
        return f;
    };

    std::vector<SFacet> facets;
    for (std::size_t skip = 0; skip < n + 1; ++skip) {
        std::vector<int> vids;
        for (std::size_t k = 0; k < n + 1; ++k)
            if (k != skip)
                vids.push_back(seed[k]);
        facets.push_back(make_facet(std::move(vids)));
    }

    // Beneath-beyond insertion. Strict visibility plus exact arithmetic keeps
    // every new facet nondegenerate; coplanar points merely subdivide faces.
    std::vector<char> in_seed(pts.size(), 0);
    for (int id : seed)
        in_seed[static_cast<std::size_t>(id)] = 1;
    for (std::size_t pi = 0; pi < pts.size(); ++pi) {
        if (in_seed[pi])
            continue;
        std::vector<int> visible;
        for (std::size_t fi = 0; fi < facets.size(); ++fi) {
            if (!facets[fi].alive)
                continue;
            if (side_of(facets[fi], pts[pi], pts_d[pi]) > 0)
                visible.push_back(static_cast<int>(fi));
        }
        if (visible.empty())
            continue;
        // Horizon ridges: (n-1)-subsets belonging to exactly one visible facet.
        std::map<std::vector<int>, int> ridge_count;
        for (int fi : visible) {
            const auto& vs = facets[static_cast<std::size_t>(fi)].verts;
            for (std::size_t drop = 0; drop < vs.size(); ++drop) {
                std::vector<int> ridge;
                for (std::size_t k = 0; k < vs.size(); ++k)
                    if (k != drop)
                        ridge.push_back(vs[k]);
                ++ridge_count[std::move(ridge)];
            }
        }
        std::vector<SFacet> fresh;
        for (const auto& [ridge, count] : ridge_count) {
            if (count > 2)
                throw GeometryError("hull: inconsistent ridge incidence");
            if (count != 1)
                continue;
            std::vector<int> vids = ridge;
            vids.push_back(static_cast<int>(pi));
            fresh.push_back(make_facet(std::move(vids)));
        }
        for (int fi : visible)
            facets[static_cast<std::size_t>(fi)].alive = false;
        for (auto& f : fresh)
            facets.push_back(std::move(f));
        facets.erase(std::remove_if(facets.begin(), facets.end(),
                                    [](const SFacet& f) { return !f.alive; }),
                     facets.end());
    }

    // Exact volume and centroid from the simplicial cone decomposition.
    Rat factorial = 1;
    for (std::size_t k = 2; k <= n; ++k)
        factorial *= static_cast<int>(k);
    Rat vol = 0;
    RatVec cent(n, Rat(0));
    for (const auto& f : facets) {
        RatMat m(n, RatVec(n));
        for (std::size_t i = 0; i < n; ++i)
            m[i] = rat_sub(pts[static_cast<std::size_t>(f.verts[i])], ref);
        Rat piece = rat_abs(rat_det(std::move(m))) / factorial;
        if (piece == 0)
            continue;
        vol += piece;
        RatVec sc = ref;  // simplex centroid accumulator
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k)
                sc[k] += pts[static_cast<std::size_t>(f.verts[i])][k];
        for (std::size_t k = 0; k < n; ++k)
            cent[k] += piece * sc[k] / static_cast<int>(n + 1);
    }
    if (vol == 0)
        throw GeometryError("hull: zero volume");
    for (std::size_t k = 0; k < n; ++k)
        cent[k] /= vol;
    volume_exact_ = vol;
    volume_ = static_cast<double>(vol);
    centroid_exact_ = cent;
    centroid_ = to_double(cent);

    // Merge simplicial facets by exact hyperplane identity. The canonical key
    // divides by the first nonzero normal coordinate; outward orientation
    // makes proportional planes positively proportional, hence key-equal.
    std::map<RatVec, std::vector<int>> groups;
    std::map<RatVec, std::pair<RatVec, Rat>> plane_of;
    for (const auto& f : facets) {
        RatVec key(n + 1);
        Rat scale;
        for (std::size_t k = 0; k < n; ++k)
            if (f.normal[k] != 0) {
                scale = rat_abs(f.normal[k]);
                break;
            }
        for (std::size_t k = 0; k < n; ++k)
            key[k] = f.normal[k] / scale;
        key[n] = f.offset / scale;
        auto& g = groups[key];
        for (int v : f.verts)
            g.push_back(v);
        plane_of.emplace(key, std::make_pair(f.normal, f.offset));
    }

    // Extreme points: a boundary point is a vertex iff its active facet
    // normals span R^n.
    std::map<int, std::vector<const RatVec*>> active;
    for (const auto& [key, g] : groups) {
        const auto& plane = plane_of.at(key);
        std::vector<int> uniq = g;
        std::sort(uniq.begin(), uniq.end());
        uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
        for (int v : uniq)
            active[v].push_back(&plane.first);
    }
    std::vector<int> extreme;
    for (const auto& [v, normals] : active) {
        if (normals.size() < n)
            continue;
        RatMat m;
        m.reserve(normals.size());
        for (const RatVec* nm : normals)
            m.push_back(*nm);
        if (rat_rank(std::move(m)) == n_)
            extreme.push_back(v);
    }

    // Canonical vertex order: exact lexicographic.
    std::sort(extreme.begin(), extreme.end(), [&](int a, int b) {
        return pts[static_cast<std::size_t>(a)] < pts[static_cast<std::size_t>(b)];
    });
    std::map<int, int> newid;
    for (std::size_t i = 0; i < extreme.size(); ++i) {
        newid[extreme[i]] = static_cast<int>(i);
        vertices_exact_.push_back(pts[static_cast<std::size_t>(extreme[i])]);
        vertices_.push_back(pts_d[static_cast<std::size_t>(extreme[i])]);
    }

    for (const auto& [key, g] : groups) {
        const auto& plane = plane_of.at(key);
        Facet mf;
        mf.normal = plane.first;
        mf.offset_exact = plane.second;
        Rat maxabs = 0;
        for (const Rat& c : mf.normal)
            maxabs = std::max(maxabs, rat_abs(c));
        Vec nd(n_);
        for (std::size_t k = 0; k < n; ++k)
            nd[static_cast<Eigen::Index>(k)] = static_cast<double>(mf.normal[k] / maxabs);
        double len = nd.norm();
        mf.unit_normal = nd / len;
        mf.offset = static_cast<double>(mf.offset_exact / maxabs) / len;
        std::vector<int> uniq = g;
        std::sort(uniq.begin(), uniq.end());
        uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
        for (int v : uniq) {
            auto it = newid.find(v);
            if (it != newid.end())
                mf.vertices.push_back(it->second);
        }
        std::sort(mf.vertices.begin(), mf.vertices.end());
        facets_.push_back(std::move(mf));
    }
    std::sort(facets_.begin(), facets_.end(), [](const Facet& a, const Facet& b) {
        return a.vertices < b.vertices;
    });
}

} // namespace vplab
