#include "vplab/body.hpp"

#include <cmath>
#include <limits>

#include "vplab/errors.hpp"

namespace vplab {

namespace {

Vec unitize(const Vec& u) {
    double len = u.norm();
    if (!(len > 0.0))
        throw GeometryError("direction vector is zero");
    return u / len;
}

// min over mu >= 0 of a convex coercive function, by bracket doubling
// followed by golden section. Used for the Lagrangian form of the support
// function of an intersection: h_{K cap H}(u) = min_mu h_K(u - mu a) + mu b.
template <class F>
double minimize_convex(const F& f, double scale) {
    const double f0 = f(0.0);
    double hi = scale;
    double fhi = f(hi);
    for (int it = 0; it < 200 && fhi <= f(hi / 2); ++it) {
        hi *= 2.0;
        fhi = f(hi);
    }
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = 0.0;
    double x1 = hi - gr * hi, x2 = gr * hi;
    double f1 = f(x1), f2 = f(x2);
    while (hi - lo > 1e-13 * (hi + 1.0)) {
        if (f1 <= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = f(x2);
        }
    }
    return std::min({f0, f1, f2});
}

Halfspace normalized_cut(const Halfspace& h) {
    double len = h.normal.norm();
    if (!(len > 0.0))
        throw GeometryError("halfspace: zero normal");
    return Halfspace{h.normal / len, h.offset / len};
}

} // namespace

ConvexBody ConvexBody::polytope(std::shared_ptr<const PolytopeData> d) {
    ConvexBody b;
    b.kind_ = BodyKind::Polytope;
    b.n_ = d->n;
    b.poly_ = std::move(d);
    return b;
}

ConvexBody ConvexBody::smooth(SmoothPtr oracle) {
    ConvexBody b;
    b.kind_ = BodyKind::Smooth;
    b.n_ = oracle->dim();
    b.oracle_ = std::move(oracle);
    return b;
}

const std::shared_ptr<const PolytopeData>& ConvexBody::polytope_data() const {
    if (!poly_)
        throw GeometryError("body is not a polytope");
    return poly_;
}

const SmoothPtr& ConvexBody::smooth_oracle() const {
    if (!oracle_)
        throw GeometryError("body has no smooth oracle");
    return oracle_;
}

std::string ConvexBody::kind_name() const {
    switch (kind_) {
    case BodyKind::Polytope: return "polytope";
    case BodyKind::Smooth: return "smooth";
    case BodyKind::Capped: return "capped";
    case BodyKind::Coned: return "coned";
    }
    return "unknown";
}

double ConvexBody::support(const Vec& u) const {
    switch (kind_) {
    case BodyKind::Polytope:
        return polytope_support(*poly_, u);
    case BodyKind::Smooth:
        return oracle_->support(u);
    case BodyKind::Coned: {
        double h = oracle_->support(u);
        for (const Vec& p : apexes_)
            h = std::max(h, p.dot(u));
        return h;
    }
    case BodyKind::Capped: {
        if (cuts_.size() == 1) {
            const auto& c = cuts_[0];
            double scale = std::max(1.0, u.norm());
            return minimize_convex(
                [&](double mu) { return oracle_->support(u - mu * c.normal) + mu * c.offset; },
                scale);
        }
        // Coordinate descent over the multipliers of all cuts.
        std::vector<double> mu(cuts_.size(), 0.0);
        double scale = std::max(1.0, u.norm());
        double value = oracle_->support(u);
        for (int round = 0; round < 12; ++round) {
            double prev = value;
            for (std::size_t j = 0; j < cuts_.size(); ++j) {
                Vec rest = u;
                double base_off = 0.0;
                for (std::size_t k = 0; k < cuts_.size(); ++k)
                    if (k != j) {
                        rest -= mu[k] * cuts_[k].normal;
                        base_off += mu[k] * cuts_[k].offset;
                    }
                const auto& c = cuts_[j];
                // Track the minimizing multiplier for this coordinate.
                double best = std::numeric_limits<double>::infinity(), best_mu = 0.0;
                auto g = [&](double m) {
                    double v = oracle_->support(rest - m * c.normal) + m * c.offset + base_off;
                    if (v < best) {
                        best = v;
                        best_mu = m;
                    }
                    return v;
                };
                minimize_convex(g, scale);
                mu[j] = best_mu;
                value = best;
            }
            if (prev - value < 1e-14 * (std::abs(value) + 1.0))
                break;
        }
        return value;
    }
    }
    throw GeometryError("unreachable");
}

double ConvexBody::radial(const Vec& u) const {
    Vec d = unitize(u);
    switch (kind_) {
    case BodyKind::Polytope:
        return polytope_radial(*poly_, d);
    case BodyKind::Smooth:
        return oracle_->radial(d);
    case BodyKind::Capped: {
        double r = oracle_->radial(d);
        for (const auto& c : cuts_) {
            if (c.offset <= 0.0)
                throw GeometryError("radial: origin is not interior to a cut");
            double den = c.normal.dot(d);
            if (den > 0.0)
                r = std::min(r, c.offset / den);
        }
        return r;
    }
    case BodyKind::Coned: {
        double rbase = oracle_->radial(d);
        // If every apex lies on the inner side of the supporting hyperplane
        // at the base boundary point, the cone does not reach past it there.
        Vec y = rbase * d;
        Vec nrm = oracle_->normal_at(y);
        bool covered = false;
        for (const Vec& p : apexes_)
            if ((p - y).dot(nrm) > 0.0) {
                covered = true;
                break;
            }
        if (!covered)
            return rbase;
        // r_cone(u) = 1 / h_{K^o cap {<p,y> <= 1}}(u), via the Lagrangian on
        // the polar's support (the gauge of the base).
        if (apexes_.size() == 1) {
            const Vec& p = apexes_[0];
            double h = minimize_convex(
                [&](double mu) { return polar_of_base_->support(d - mu * p) + mu; }, 1.0);
            return 1.0 / h;
        }
        ConvexBody polar_capped;
        polar_capped.kind_ = BodyKind::Capped;
        polar_capped.n_ = n_;
        polar_capped.oracle_ = polar_of_base_;
        for (const Vec& p : apexes_)
            polar_capped.cuts_.push_back(normalized_cut(Halfspace{p, 1.0}));
        return 1.0 / polar_capped.support(d);
    }
    }
    throw GeometryError("unreachable");
}

bool ConvexBody::contains(const Vec& x, double tol) const {
    switch (kind_) {
    case BodyKind::Polytope:
        return polytope_contains(*poly_, x, tol);
    case BodyKind::Smooth:
        return oracle_->member(x);
    case BodyKind::Capped: {
        if (!oracle_->member(x))
            return false;
        for (const auto& c : cuts_)
            if (c.normal.dot(x) > c.offset + tol * (1.0 + std::abs(c.offset)))
                return false;
        return true;
    }
    case BodyKind::Coned: {
        double len = x.norm();
        if (len == 0.0)
            return true;
        double r = radial(x);
        return len <= r * (1.0 + tol);
    }
    }
    throw GeometryError("unreachable");
}

Vec ConvexBody::normal_at(const Vec& x) const {
    switch (kind_) {
    case BodyKind::Polytope:
        return polytope_normal_at(*poly_, x);
    case BodyKind::Smooth:
        return oracle_->normal_at(x);
    case BodyKind::Capped: {
        // Distinguish base boundary from cut planes.
        double tol = 1e-9;
        int active_cuts = 0;
        const Halfspace* hit = nullptr;
        for (const auto& c : cuts_) {
            double gap = c.offset - c.normal.dot(x);
            if (std::abs(gap) <= tol * (1.0 + std::abs(c.offset))) {
                ++active_cuts;
                hit = &c;
            } else if (gap < 0.0) {
                throw GeometryError("normal_at: point lies outside a cut");
            }
        }
        // x is on the base boundary iff it attains the base support in the
        // direction of the (gradient) normal there.
        Vec nb = oracle_->normal_at(x);
        double hb = oracle_->support(nb);
        bool on_base = std::abs(nb.dot(x) - hb) <= tol * (1.0 + std::abs(hb));
        if (active_cuts == 0) {
            if (!on_base)
                throw GeometryError("normal_at: point is not on the boundary");
            return nb;
        }
        if (active_cuts == 1 && !on_base)
            return hit->normal;
        throw NonUniqueNormalError("normal_at: point lies on a cap ridge");
    }
    case BodyKind::Coned:
        throw GeometryError("normal_at: not available on coned bodies");
    }
    throw GeometryError("unreachable");
}

Vec ConvexBody::support_point(const Vec& u) const {
    switch (kind_) {
    case BodyKind::Polytope: {
        double best = -std::numeric_limits<double>::infinity();
        const Vec* arg = nullptr;
        for (const Vec& v : poly_->vertices) {
            double s = v.dot(u);
            if (s > best) {
                best = s;
                arg = &v;
            }
        }
        return *arg;
    }
    case BodyKind::Smooth:
        return oracle_->support_point(u);
    case BodyKind::Coned: {
        double best = oracle_->support(u);
        const Vec* arg = nullptr;
        for (const Vec& p : apexes_)
            if (p.dot(u) > best) {
                best = p.dot(u);
                arg = &p;
            }
        return arg ? *arg : oracle_->support_point(u);
    }
    case BodyKind::Capped:
        throw GeometryError("support_point: not available on capped bodies");
    }
    throw GeometryError("unreachable");
}

std::optional<double> ConvexBody::exact_volume() const {
    switch (kind_) {
    case BodyKind::Polytope:
        return poly_->volume;
    case BodyKind::Smooth:
        return oracle_->known_volume();
    default:
        return std::nullopt;
    }
}

std::optional<Vec> ConvexBody::exact_centroid() const {
    switch (kind_) {
    case BodyKind::Polytope:
        return poly_->centroid;
    case BodyKind::Smooth:
        return oracle_->known_centroid();
    default:
        return std::nullopt;
    }
}

ConvexBody ConvexBody::translated(const Vec& t) const {
    ConvexBody b = *this;
    switch (kind_) {
    case BodyKind::Polytope:
        b.poly_ = polytope_translate(*poly_, t);
        return b;
    case BodyKind::Smooth:
        b.oracle_ = oracle_->translated(t);
        return b;
    case BodyKind::Capped:
        b.oracle_ = oracle_->translated(t);
        for (auto& c : b.cuts_)
            c.offset += c.normal.dot(t);
        return b;
    case BodyKind::Coned:
        b.oracle_ = oracle_->translated(t);
        b.polar_of_base_ = std::make_shared<PolarOracle>(b.oracle_);
        for (auto& p : b.apexes_)
            p += t;
        return b;
    }
    throw GeometryError("unreachable");
}

ConvexBody ConvexBody::linear_image(const Mat& A) const {
    ConvexBody b = *this;
    switch (kind_) {
    case BodyKind::Polytope:
        b.poly_ = polytope_linear_image(*poly_, A);
        return b;
    case BodyKind::Smooth:
        b.oracle_ = oracle_->linear_image(A);
        return b;
    case BodyKind::Capped: {
        b.oracle_ = oracle_->linear_image(A);
        Mat AinvT = A.inverse().transpose();
        for (auto& c : b.cuts_)
            c = normalized_cut(Halfspace{AinvT * c.normal, c.offset});
        return b;
    }
    case BodyKind::Coned:
        b.oracle_ = oracle_->linear_image(A);
        b.polar_of_base_ = std::make_shared<PolarOracle>(b.oracle_);
        for (auto& p : b.apexes_)
            p = A * p;
        return b;
    }
    throw GeometryError("unreachable");
}

ConvexBody ConvexBody::polar_dual(const Vec& z) const {
    switch (kind_) {
    case BodyKind::Polytope:
        return ConvexBody::polytope(polytope_polar(*poly_, z));
    case BodyKind::Smooth: {
        // the polar of an ellipsoid about its own center inverts the form
        if (auto ell = std::dynamic_pointer_cast<const EllipsoidOracle>(oracle_)) {
            if ((ell->center() - z).norm() == 0.0) {
                Mat Minv = ell->quadratic_form().inverse();
                return ConvexBody::smooth(std::make_shared<EllipsoidOracle>(
                    0.5 * (Minv + Minv.transpose().eval()), Vec::Zero(n_)));
            }
        }
        SmoothPtr base = z.isZero(0.0) ? oracle_ : oracle_->translated(-z);
        return ConvexBody::smooth(std::make_shared<PolarOracle>(base));
    }
    case BodyKind::Capped: {
        ConvexBody b;
        b.kind_ = BodyKind::Coned;
        b.n_ = n_;
        SmoothPtr base = z.isZero(0.0) ? oracle_ : oracle_->translated(-z);
        b.oracle_ = std::make_shared<PolarOracle>(base);
        b.polar_of_base_ = base;  // polar of the polar is the base itself
        for (const auto& c : cuts_) {
            double off = c.offset - c.normal.dot(z);
            if (off <= 0.0)
                throw GeometryError("polar: center is not interior to a cut");
            b.apexes_.push_back(c.normal / off);
        }
        return b;
    }
    case BodyKind::Coned: {
        ConvexBody b;
        b.kind_ = BodyKind::Capped;
        b.n_ = n_;
        SmoothPtr base = z.isZero(0.0) ? oracle_ : oracle_->translated(-z);
        b.oracle_ = std::make_shared<PolarOracle>(base);
        for (const Vec& p : apexes_)
            b.cuts_.push_back(normalized_cut(Halfspace{p - z, 1.0}));
        return b;
    }
    }
    throw GeometryError("unreachable");
}

ConvexBody ConvexBody::intersect_halfspace(const Halfspace& h) const {
    switch (kind_) {
    case BodyKind::Polytope:
        return ConvexBody::polytope(polytope_intersect(*poly_, h));
    case BodyKind::Smooth:
    case BodyKind::Capped: {
        Halfspace c = normalized_cut(h);
        if (-support(-c.normal) >= c.offset)
            throw GeometryError("intersect: intersection has empty interior");
        if (support(c.normal) <= c.offset)
            return *this;  // redundant cut leaves the body unchanged
        ConvexBody b = *this;
        b.kind_ = BodyKind::Capped;
        b.cuts_.push_back(c);
        return b;
    }
    case BodyKind::Coned:
        throw GeometryError("intersect: cap on a coned body is not supported");
    }
    throw GeometryError("unreachable");
}

ConvexBody ConvexBody::with_point(const Vec& p) const {
    switch (kind_) {
    case BodyKind::Polytope:
        return ConvexBody::polytope(polytope_add_point(*poly_, p));
    case BodyKind::Smooth:
    case BodyKind::Coned: {
        ConvexBody b = *this;
        if (contains(p))
            return b;
        b.kind_ = BodyKind::Coned;
        if (!b.polar_of_base_)
            b.polar_of_base_ = std::make_shared<PolarOracle>(oracle_);
        b.apexes_.push_back(p);
        return b;
    }
    case BodyKind::Capped:
        throw GeometryError("with_point: cone on a capped body is not supported");
    }
    throw GeometryError("unreachable");
}

} // namespace vplab
