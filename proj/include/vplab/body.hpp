#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "vplab/halfspace.hpp"
#include "vplab/polytope.hpp"
#include "vplab/smooth.hpp"

namespace vplab {

enum class BodyKind { Polytope, Smooth, Capped, Coned };

/// Common facade over the four body representations.
///
/// Polytopes stay exact through every operation. Smooth bodies delegate to
/// their oracle. Capped (smooth base intersected with halfspaces) and Coned
/// (smooth base joined with apex points) are the perturbation classes; they
/// are closed under polarity, which swaps them:
///   (K cap {<a,x> <= b})^o = conv(K^o cup {a/b}),   0 interior.
class ConvexBody {
public:
    static ConvexBody polytope(std::shared_ptr<const PolytopeData> d);
    static ConvexBody smooth(SmoothPtr oracle);

    int dim() const { return n_; }
    BodyKind kind() const { return kind_; }

    double support(const Vec& u) const;
    double radial(const Vec& u) const;          ///< requires 0 interior
    bool contains(const Vec& x, double tol = 1e-12) const;
    Vec normal_at(const Vec& x) const;
    Vec support_point(const Vec& u) const;

    std::optional<double> exact_volume() const;
    std::optional<Vec> exact_centroid() const;

    ConvexBody translated(const Vec& t) const;
    ConvexBody linear_image(const Mat& A) const;

    /// Polar dual (K - z)^o; z must be interior.
    ConvexBody polar_dual(const Vec& z) const;

    /// Intersection with a halfspace: exact for polytopes, a cap wrapper for
    /// smooth bodies. Not defined on coned bodies.
    ConvexBody intersect_halfspace(const Halfspace& h) const;

    /// Convex hull with one extra point: exact for polytopes, a cone wrapper
    /// for smooth bodies. Not defined on capped bodies.
    ConvexBody with_point(const Vec& p) const;

    bool is_polytope() const { return kind_ == BodyKind::Polytope; }
    const std::shared_ptr<const PolytopeData>& polytope_data() const;
    const SmoothPtr& smooth_oracle() const;
    const std::vector<Halfspace>& cuts() const { return cuts_; }
    const std::vector<Vec>& apexes() const { return apexes_; }

    std::string kind_name() const;

private:
    ConvexBody() = default;

    BodyKind kind_ = BodyKind::Polytope;
    int n_ = 0;
    std::shared_ptr<const PolytopeData> poly_;
    SmoothPtr oracle_;                  ///< smooth base for Smooth/Capped/Coned
    std::vector<Halfspace> cuts_;       ///< Capped only
    std::vector<Vec> apexes_;           ///< Coned only
    SmoothPtr polar_of_base_;           ///< Coned only, powers the radial trick
};

} // namespace vplab
