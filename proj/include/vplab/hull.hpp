#pragma once

#include <vector>

#include "vplab/rat.hpp"
#include "vplab/vec.hpp"

namespace vplab {

/// Incremental convex hull in R^n, 2 <= n <= 6, with exact rational
/// predicates. Handles heavily degenerate input (many coplanar points)
/// without perturbation: simplicial facets are merged afterwards by exact
/// hyperplane identity, and extreme points are filtered by the exact rank of
/// their active facet normals.
class ExactHull {
public:
    struct Facet {
        Vec unit_normal;            ///< outward, |unit_normal| = 1 up to rounding
        double offset;              ///< <unit_normal, x> <= offset on the hull
        RatVec normal;              ///< exact unnormalized outward normal
        Rat offset_exact;
        std::vector<int> vertices;  ///< indices into vertices(), sorted
    };

    explicit ExactHull(const std::vector<Vec>& points);
    explicit ExactHull(std::vector<RatVec> points);

    int dim() const { return n_; }

    /// Extreme points only, lexicographically sorted.
    const std::vector<Vec>& vertices() const { return vertices_; }
    const std::vector<RatVec>& vertices_exact() const { return vertices_exact_; }

    /// Merged (non-simplicial) facets.
    const std::vector<Facet>& facets() const { return facets_; }

    double volume() const { return volume_; }
    const Rat& volume_exact() const { return volume_exact_; }
    Vec centroid() const { return centroid_; }
    const RatVec& centroid_exact() const { return centroid_exact_; }

private:
    void build(std::vector<RatVec> pts);

    int n_ = 0;
    std::vector<Vec> vertices_;
    std::vector<RatVec> vertices_exact_;
    std::vector<Facet> facets_;
    double volume_ = 0.0;
    Rat volume_exact_ = 0;
    Vec centroid_;
    RatVec centroid_exact_;
};

} // namespace vplab
