#include "vplab/smooth.hpp"

#include <cmath>

#include <Eigen/Cholesky>

#include "vplab/errors.hpp"

namespace vplab {

namespace {

Vec unitize(const Vec& u) {
    double len = u.norm();
    if (!(len > 0.0))
        throw GeometryError("direction vector is zero");
    return u / len;
}

} // namespace

double unit_ball_volume(int n) {
    return std::pow(M_PI, n / 2.0) / std::tgamma(n / 2.0 + 1.0);
}

double SmoothOracle::radial(const Vec& u) const { return radial_by_bisection(u); }

double SmoothOracle::radial_by_bisection(const Vec& u) const {
    Vec d = unitize(u);
    if (!member(Vec::Zero(dim())))
        throw GeometryError("radial: origin is not interior");
    double hi = support(d);
    if (!(hi > 0.0))
        throw GeometryError("radial: origin is not interior");
    if (member(hi * d))
        return hi;
    double lo = 0.0;
    for (int it = 0; it < 200 && (hi - lo) > 1e-16 * hi; ++it) {
        double mid = 0.5 * (lo + hi);
        (member(mid * d) ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

std::shared_ptr<const SmoothOracle> SmoothOracle::translated(const Vec& t) const {
    return std::make_shared<AffineImageOracle>(shared_from_this(),
                                               Mat::Identity(dim(), dim()), t);
}

std::shared_ptr<const SmoothOracle> SmoothOracle::linear_image(const Mat& A) const {
    return std::make_shared<AffineImageOracle>(shared_from_this(), A, Vec::Zero(dim()));
}

EllipsoidOracle::EllipsoidOracle(Mat M, Vec center) : M_(std::move(M)), c_(std::move(center)) {
    if (M_.rows() != c_.size() || M_.cols() != c_.size())
        throw GeometryError("ellipsoid: shape mismatch");
    if (!M_.isApprox(M_.transpose(), 1e-12))
        throw GeometryError("ellipsoid: form is not symmetric");
    M_ = 0.5 * (M_ + M_.transpose().eval());
    Eigen::LLT<Mat> llt(M_);
    if (llt.info() != Eigen::Success)
        throw GeometryError("ellipsoid: form is not positive definite");
    Minv_ = llt.solve(Mat::Identity(M_.rows(), M_.cols()));
}

SmoothPtr EllipsoidOracle::ball(int n, double radius) {
    return std::make_shared<EllipsoidOracle>(Mat::Identity(n, n) / (radius * radius),
                                             Vec::Zero(n));
}

SmoothPtr EllipsoidOracle::from_semiaxes(const Vec& semiaxes) {
    const auto n = semiaxes.size();
    Mat M = Mat::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!(semiaxes[i] > 0.0))
            throw GeometryError("ellipsoid: semiaxes must be positive");
        M(i, i) = 1.0 / (semiaxes[i] * semiaxes[i]);
    }
    return std::make_shared<EllipsoidOracle>(M, Vec::Zero(n));
}

bool EllipsoidOracle::member(const Vec& x) const {
    Vec d = x - c_;
    return d.dot(M_ * d) <= 1.0;
}

double EllipsoidOracle::support(const Vec& u) const {
    return c_.dot(u) + std::sqrt(u.dot(Minv_ * u));
}

double EllipsoidOracle::radial(const Vec& u) const {
    Vec d = unitize(u);
    double a = d.dot(M_ * d);
    double b = -2.0 * d.dot(M_ * c_);
    double c0 = c_.dot(M_ * c_) - 1.0;
    if (c0 >= 0.0)
        throw GeometryError("radial: origin is not interior");
    return (-b + std::sqrt(b * b - 4.0 * a * c0)) / (2.0 * a);
}

Vec EllipsoidOracle::support_point(const Vec& u) const {
    Vec w = Minv_ * u;
    return c_ + w / std::sqrt(u.dot(w));
}

Vec EllipsoidOracle::normal_at(const Vec& x) const {
    Vec g = M_ * (x - c_);
    double len = g.norm();
    if (!(len > 0.0))
        throw GeometryError("normal_at: point is the center");
    return g / len;
}

std::optional<double> EllipsoidOracle::known_volume() const {
    return unit_ball_volume(dim()) / std::sqrt(M_.determinant());
}

std::shared_ptr<const SmoothOracle> EllipsoidOracle::translated(const Vec& t) const {
    return std::make_shared<EllipsoidOracle>(M_, c_ + t);
}

std::shared_ptr<const SmoothOracle> EllipsoidOracle::linear_image(const Mat& A) const {
    Eigen::FullPivLU<Mat> lu(A);
    if (!lu.isInvertible())
        throw GeometryError("linear_image: singular matrix");
    Mat Ainv = lu.inverse();
    Mat M2 = Ainv.transpose() * M_ * Ainv;
    return std::make_shared<EllipsoidOracle>(0.5 * (M2 + M2.transpose().eval()), A * c_);
}

LpBallOracle::LpBallOracle(int n, double p, double R) : n_(n), p_(p), R_(R) {
    if (!(p > 1.0) || !std::isfinite(p))
        throw GeometryError("lp ball: p must be finite and greater than 1");
    if (!(R > 0.0))
        throw GeometryError("lp ball: radius must be positive");
    q_ = p / (p - 1.0);
}

bool LpBallOracle::member(const Vec& x) const {
    double s = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i)
        s += std::pow(std::abs(x[i]) / R_, p_);
    return s <= 1.0;
}

double LpBallOracle::support(const Vec& u) const {
    double s = 0.0;
    for (Eigen::Index i = 0; i < u.size(); ++i)
        s += std::pow(std::abs(u[i]), q_);
    return R_ * std::pow(s, 1.0 / q_);
}

double LpBallOracle::radial(const Vec& u) const {
    Vec d = unitize(u);
    double s = 0.0;
    for (Eigen::Index i = 0; i < d.size(); ++i)
        s += std::pow(std::abs(d[i]), p_);
    return R_ / std::pow(s, 1.0 / p_);
}

Vec LpBallOracle::support_point(const Vec& u) const {
    double nq = 0.0;
    for (Eigen::Index i = 0; i < u.size(); ++i)
        nq += std::pow(std::abs(u[i]), q_);
    nq = std::pow(nq, 1.0 / q_);
    if (!(nq > 0.0))
        throw GeometryError("support_point: direction vector is zero");
    Vec x(u.size());
    for (Eigen::Index i = 0; i < u.size(); ++i) {
        double m = std::pow(std::abs(u[i]) / nq, q_ - 1.0);
        x[i] = R_ * (u[i] < 0.0 ? -m : m);
    }
    return x;
}

Vec LpBallOracle::normal_at(const Vec& x) const {
    Vec g(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        double m = std::pow(std::abs(x[i]) / R_, p_ - 1.0);
        g[i] = x[i] < 0.0 ? -m : m;
    }
    double len = g.norm();
    if (!(len > 0.0))
        throw GeometryError("normal_at: gradient vanished");
    return g / len;
}

std::optional<double> LpBallOracle::known_volume() const {
    // (2R)^n Gamma(1+1/p)^n / Gamma(1+n/p)
    double lg = n_ * std::log(2.0 * R_) + n_ * std::lgamma(1.0 + 1.0 / p_) -
                std::lgamma(1.0 + n_ / p_);
    return std::exp(lg);
}

AffineImageOracle::AffineImageOracle(SmoothPtr base, Mat A, Vec t)
    : base_(std::move(base)), A_(std::move(A)), t_(std::move(t)) {
    if (A_.rows() != t_.size() || A_.cols() != base_->dim())
        throw GeometryError("affine image: shape mismatch");
    Eigen::FullPivLU<Mat> lu(A_);
    if (!lu.isInvertible())
        throw GeometryError("affine image: singular matrix");
    Ainv_ = lu.inverse();
    absdet_ = std::abs(lu.determinant());
}

bool AffineImageOracle::member(const Vec& x) const { return base_->member(Ainv_ * (x - t_)); }

double AffineImageOracle::support(const Vec& u) const {
    return base_->support(A_.transpose() * u) + t_.dot(u);
}

double AffineImageOracle::radial(const Vec& u) const { return radial_by_bisection(u); }

Vec AffineImageOracle::support_point(const Vec& u) const {
    return A_ * base_->support_point(A_.transpose() * u) + t_;
}

Vec AffineImageOracle::normal_at(const Vec& x) const {
    Vec g = Ainv_.transpose() * base_->normal_at(Ainv_ * (x - t_));
    return g / g.norm();
}

std::optional<double> AffineImageOracle::known_volume() const {
    if (auto v = base_->known_volume())
        return absdet_ * *v;
    return std::nullopt;
}

std::optional<Vec> AffineImageOracle::known_centroid() const {
    if (auto c = base_->known_centroid())
        return A_ * *c + t_;
    return std::nullopt;
}

std::shared_ptr<const SmoothOracle> AffineImageOracle::translated(const Vec& t) const {
    return std::make_shared<AffineImageOracle>(base_, A_, t_ + t);
}

std::shared_ptr<const SmoothOracle> AffineImageOracle::linear_image(const Mat& A) const {
    return std::make_shared<AffineImageOracle>(base_, A * A_, A * t_);
}

PolarOracle::PolarOracle(SmoothPtr base) : base_(std::move(base)) {
    if (!base_->member(Vec::Zero(base_->dim())))
        throw GeometryError("polar: origin is not interior to the base body");
}

bool PolarOracle::member(const Vec& x) const { return base_->support(x) <= 1.0; }

double PolarOracle::support(const Vec& u) const {
    // Support of the polar is the gauge of the base body.
    double len = u.norm();
    if (!(len > 0.0))
        return 0.0;
    return len / base_->radial(u);
}

double PolarOracle::radial(const Vec& u) const {
    double h = base_->support(unitize(u));
    if (!(h > 0.0))
        throw GeometryError("polar radial: base support is not positive");
    return 1.0 / h;
}

Vec PolarOracle::support_point(const Vec& u) const {
    Vec d = unitize(u);
    Vec x = base_->radial(d) * d;
    Vec nrm = base_->normal_at(x);
    double denom = x.dot(nrm);
    if (!(denom > 0.0))
        throw GeometryError("polar support_point: degenerate duality map");
    return nrm / denom;
}

Vec PolarOracle::normal_at(const Vec& x) const {
    Vec s = base_->support_point(x);
    double len = s.norm();
    if (!(len > 0.0))
        throw GeometryError("polar normal_at: zero support point");
    return s / len;
}

} // namespace vplab
