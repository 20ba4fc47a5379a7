#pragma once

#include <memory>
#include <vector>

#include "vplab/halfspace.hpp"
#include "vplab/rat.hpp"
#include "vplab/vec.hpp"

namespace vplab {

/// Canonical bounded full-dimensional polytope. Both representations are
/// computed eagerly through the exact hull, so every instance carries an
/// irredundant vertex list, merged facets, exact volume and exact centroid.
struct PolytopeData {
    int n = 0;
    std::vector<Vec> vertices;               ///< extreme points, lex sorted
    std::vector<RatVec> vertices_exact;
    std::vector<Halfspace> facets;           ///< unit outward normals
    std::vector<std::pair<RatVec, Rat>> facets_exact;  ///< unnormalized planes
    double volume = 0.0;
    Rat volume_exact = 0;
    Vec centroid;
    RatVec centroid_exact;
    Vec interior_point;                      ///< = centroid
};

std::shared_ptr<const PolytopeData> build_polytope(std::vector<RatVec> vertices);

class VPolytope {
public:
    explicit VPolytope(const std::vector<Vec>& points);
    explicit VPolytope(std::vector<RatVec> points);
    explicit VPolytope(std::shared_ptr<const PolytopeData> d) : d_(std::move(d)) {}

    int dim() const { return d_->n; }
    const std::vector<Vec>& vertices() const { return d_->vertices; }
    const std::vector<Halfspace>& halfspaces() const { return d_->facets; }
    double volume() const { return d_->volume; }
    Vec centroid() const { return d_->centroid; }
    Vec interior_point() const { return d_->interior_point; }
    const std::shared_ptr<const PolytopeData>& data() const { return d_; }

private:
    std::shared_ptr<const PolytopeData> d_;
};

class HPolytope {
public:
    /// Validates the system, drops duplicate halfspaces, checks boundedness
    /// and the interior point slack, and enumerates the vertices exactly.
    HPolytope(const std::vector<Halfspace>& halfspaces, const Vec& interior_point);
    explicit HPolytope(std::shared_ptr<const PolytopeData> d) : d_(std::move(d)) {}

    int dim() const { return d_->n; }
    const std::vector<Vec>& vertices() const { return d_->vertices; }
    const std::vector<Halfspace>& halfspaces() const { return d_->facets; }
    double volume() const { return d_->volume; }
    Vec centroid() const { return d_->centroid; }
    Vec interior_point() const { return d_->interior_point; }
    const std::shared_ptr<const PolytopeData>& data() const { return d_; }

private:
    std::shared_ptr<const PolytopeData> d_;
};

// Shared evaluation over the canonical data.
double polytope_support(const PolytopeData& P, const Vec& u);
double polytope_radial(const PolytopeData& P, const Vec& u);
bool polytope_contains(const PolytopeData& P, const Vec& x, double tol = 1e-12);
Vec polytope_normal_at(const PolytopeData& P, const Vec& x, double tol = 1e-9);

/// Polar (K - z)^o computed exactly; z must be interior with slack.
std::shared_ptr<const PolytopeData> polytope_polar(const PolytopeData& P, const Vec& z);

std::shared_ptr<const PolytopeData> polytope_intersect(const PolytopeData& P,
                                                       const Halfspace& h);
std::shared_ptr<const PolytopeData> polytope_add_point(const PolytopeData& P,
                                                       const Vec& p);
std::shared_ptr<const PolytopeData> polytope_translate(const PolytopeData& P,
                                                       const Vec& t);
std::shared_ptr<const PolytopeData> polytope_linear_image(const PolytopeData& P,
                                                          const Mat& A);

// Convenience constructions.
VPolytope make_cube(int n, double halfwidth = 1.0);
VPolytope make_cross_polytope(int n, double radius = 1.0);
VPolytope make_simplex(int n);  ///< conv{0, e_1, ..., e_n}
VPolytope make_regular_simplex(int n);  ///< regular, centroid at the origin

} // namespace vplab
