#pragma once

#include <memory>
#include <optional>

#include "vplab/vec.hpp"

namespace vplab {

/// Volume of the unit euclidean ball in R^n.
double unit_ball_volume(int n);

/// A smooth convex body given by closed-form (or nearly closed-form)
/// evaluators. Instances are immutable and shared.
///
/// Conventions: support(u) is positively homogeneous in u; radial(u) is the
/// boundary distance along u/|u| and requires the origin in the interior;
/// support_point(u) is a boundary point whose outward normal is u/|u|;
/// normal_at(x) is the unit outward normal at a boundary point x.
class SmoothOracle : public std::enable_shared_from_this<SmoothOracle> {
public:
    virtual ~SmoothOracle() = default;

    virtual int dim() const = 0;
    virtual bool member(const Vec& x) const = 0;
    virtual double support(const Vec& u) const = 0;
    virtual double radial(const Vec& u) const;
    virtual Vec support_point(const Vec& u) const = 0;
    virtual Vec normal_at(const Vec& x) const = 0;

    /// Closed-form volume when the family admits one.
    virtual std::optional<double> known_volume() const { return std::nullopt; }

    /// Closed-form centroid when the family admits one.
    virtual std::optional<Vec> known_centroid() const { return std::nullopt; }

    virtual std::shared_ptr<const SmoothOracle> translated(const Vec& t) const;
    virtual std::shared_ptr<const SmoothOracle> linear_image(const Mat& A) const;

protected:
    /// Bisection of member() along the ray; usable whenever 0 is interior.
    double radial_by_bisection(const Vec& u) const;
};

using SmoothPtr = std::shared_ptr<const SmoothOracle>;

/// Ellipsoid (x - c)^T M (x - c) <= 1 with M symmetric positive definite.
/// The family is closed under invertible affine maps, so the whole
/// normalization pipeline stays in closed form on it.
class EllipsoidOracle final : public SmoothOracle {
public:
    EllipsoidOracle(Mat M, Vec center);
    static SmoothPtr ball(int n, double radius = 1.0);
    static SmoothPtr from_semiaxes(const Vec& semiaxes);

    int dim() const override { return static_cast<int>(c_.size()); }
    bool member(const Vec& x) const override;
    double support(const Vec& u) const override;
    double radial(const Vec& u) const override;
    Vec support_point(const Vec& u) const override;
    Vec normal_at(const Vec& x) const override;
    std::optional<double> known_volume() const override;
    std::optional<Vec> known_centroid() const override { return c_; }
    std::shared_ptr<const SmoothOracle> translated(const Vec& t) const override;
    std::shared_ptr<const SmoothOracle> linear_image(const Mat& A) const override;

    const Mat& quadratic_form() const { return M_; }
    const Vec& center() const { return c_; }

private:
    Mat M_, Minv_;
    Vec c_;
};

/// The unit ball of the l_p norm scaled by R, for finite p > 1.
class LpBallOracle final : public SmoothOracle {
public:
    LpBallOracle(int n, double p, double R = 1.0);

    int dim() const override { return n_; }
    bool member(const Vec& x) const override;
    double support(const Vec& u) const override;
    double radial(const Vec& u) const override;
    Vec support_point(const Vec& u) const override;
    Vec normal_at(const Vec& x) const override;
    std::optional<double> known_volume() const override;
    std::optional<Vec> known_centroid() const override { return Vec::Zero(n_); }

    double p() const { return p_; }
    double radius() const { return R_; }

private:
    int n_;
    double p_, q_, R_;
};

/// A K + t for an invertible A; the generic closure of the family.
class AffineImageOracle final : public SmoothOracle {
public:
    AffineImageOracle(SmoothPtr base, Mat A, Vec t);

    int dim() const override { return static_cast<int>(t_.size()); }
    bool member(const Vec& x) const override;
    double support(const Vec& u) const override;
    double radial(const Vec& u) const override;
    Vec support_point(const Vec& u) const override;
    Vec normal_at(const Vec& x) const override;
    std::optional<double> known_volume() const override;
    std::optional<Vec> known_centroid() const override;
    std::shared_ptr<const SmoothOracle> translated(const Vec& t) const override;
    std::shared_ptr<const SmoothOracle> linear_image(const Mat& A) const override;

private:
    SmoothPtr base_;
    Mat A_, Ainv_;
    Vec t_;
    double absdet_;
};

/// Polar K^o of a smooth body with 0 interior, again as a smooth oracle:
/// support of the polar is the gauge of K, radial is 1/support, and the
/// duality map x -> N(x)/<x, N(x)> gives support points.
class PolarOracle final : public SmoothOracle {
public:
    explicit PolarOracle(SmoothPtr base);

    int dim() const override { return base_->dim(); }
    bool member(const Vec& x) const override;
    double support(const Vec& u) const override;
    double radial(const Vec& u) const override;
    Vec support_point(const Vec& u) const override;
    Vec normal_at(const Vec& x) const override;

private:
    SmoothPtr base_;
};

} // namespace vplab
