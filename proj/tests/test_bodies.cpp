#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "vplab/body.hpp"
#include "vplab/errors.hpp"
#include "vplab/sampling.hpp"
#include "vplab/smooth.hpp"

using namespace vplab;

namespace {

std::vector<Vec> sphere_dirs(int n, int count, std::uint64_t seed = 7) {
    std::vector<Vec> out;
    Sobol sob(n, seed, 0);
    double pt[8];
    for (int i = 0; i < count; ++i) {
        sob.next(pt);
        out.push_back(cube_to_sphere(pt, n));
    }
    return out;
}

// Membership self-consistency: r(u) u is on the boundary within relative 1e-8.
void check_radial_support_consistency(const ConvexBody& K, int dirs = 100) {
    for (const Vec& u : sphere_dirs(K.dim(), dirs)) {
        double r = K.radial(u);
        REQUIRE(r > 0.0);
        CHECK(K.contains(r * (1.0 - 1e-8) * u, 1e-12));
        CHECK_FALSE(K.contains(r * (1.0 + 1e-8) * u, 1e-12));
        // support dominates every boundary point in its own direction
        CHECK(K.support(u) >= r - 1e-12 * (1.0 + r));
    }
}

}  // namespace

TEST_CASE("ellipsoid oracle matches closed forms") {
    Vec axes(2);
    axes << 2.0, 1.0;
    auto E = EllipsoidOracle::from_semiaxes(axes);
    for (const Vec& u : sphere_dirs(2, 200)) {
        double h_expected = std::sqrt(4.0 * u(0) * u(0) + u(1) * u(1));
        double r_expected = 1.0 / std::sqrt(u(0) * u(0) / 4.0 + u(1) * u(1));
        CHECK(E->support(u) == doctest::Approx(h_expected).epsilon(1e-13));
        CHECK(E->radial(u) == doctest::Approx(r_expected).epsilon(1e-13));
        Vec s = E->support_point(u);
        CHECK(u.dot(s) == doctest::Approx(E->support(u)).epsilon(1e-13));
        // support point lies on the boundary and has outward normal u
        CHECK(s(0) * s(0) / 4.0 + s(1) * s(1) == doctest::Approx(1.0).epsilon(1e-12));
        Vec nrm = E->normal_at(s);
        CHECK((nrm - u).norm() < 1e-10);
    }
    CHECK(*E->known_volume() == doctest::Approx(2.0 * M_PI).epsilon(1e-14));
}

TEST_CASE("ball oracle is rotation invariant") {
    auto B = EllipsoidOracle::ball(4, 1.5);
    for (const Vec& u : sphere_dirs(4, 50)) {
        CHECK(B->support(u) == doctest::Approx(1.5).epsilon(1e-14));
        CHECK(B->radial(u) == doctest::Approx(1.5).epsilon(1e-14));
    }
    double k4 = M_PI * M_PI / 2.0;
    CHECK(*B->known_volume() == doctest::Approx(k4 * std::pow(1.5, 4)).epsilon(1e-13));
}

TEST_CASE("translated ellipsoid shifts support affinely") {
    auto B = EllipsoidOracle::ball(3, 1.0);
    Vec t(3);
    t << 0.3, -0.1, 0.2;
    auto Bt = B->translated(t);
    for (const Vec& u : sphere_dirs(3, 100)) {
        CHECK(Bt->support(u) == doctest::Approx(1.0 + t.dot(u)).epsilon(1e-13));
    }
    CHECK(*Bt->known_volume() == doctest::Approx(4.0 * M_PI / 3.0).epsilon(1e-13));
    Vec c = *Bt->known_centroid();
    CHECK((c - t).norm() < 1e-14);
}

TEST_CASE("lp ball oracle closed forms") {
    const int n = 3;
    const double p = 4.0, R = 1.5, q = p / (p - 1.0);
    auto L = std::make_shared<LpBallOracle>(n, p, R);
    for (const Vec& u : sphere_dirs(n, 200)) {
        double nq = 0.0, np = 0.0;
        for (int i = 0; i < n; ++i) {
            nq += std::pow(std::abs(u(i)), q);
            np += std::pow(std::abs(u(i)), p);
        }
        CHECK(L->support(u) == doctest::Approx(R * std::pow(nq, 1.0 / q)).epsilon(1e-12));
        CHECK(L->radial(u) == doctest::Approx(R / std::pow(np, 1.0 / p)).epsilon(1e-12));
        Vec s = L->support_point(u);
        CHECK(u.dot(s) == doctest::Approx(L->support(u)).epsilon(1e-12));
        double gauge = 0.0;
        for (int i = 0; i < n; ++i) gauge += std::pow(std::abs(s(i)) / R, p);
        CHECK(gauge == doctest::Approx(1.0).epsilon(1e-10));
        CHECK((L->normal_at(s) - u).norm() < 1e-9);
    }
    // volume via gamma functions, computed here independently of the oracle
    double expected = std::pow(2.0 * R, n) * std::pow(std::tgamma(1.0 + 1.0 / p), n) /
                      std::tgamma(1.0 + n / p);
    CHECK(*L->known_volume() == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("affine image agrees with explicitly mapped ellipsoid") {
    Mat A(3, 3);
    A << 1.0, 0.4, 0.0,
         0.0, 0.8, -0.3,
         0.2, 0.0, 1.1;
    auto ball = EllipsoidOracle::ball(3, 1.0);
    AffineImageOracle img(ball, A, Vec::Zero(3));
    Mat Ainv = A.inverse();
    Mat M = Ainv.transpose() * Ainv;
    EllipsoidOracle ref(0.5 * (M + M.transpose()), Vec::Zero(3));
    for (const Vec& u : sphere_dirs(3, 200)) {
        CHECK(img.support(u) == doctest::Approx(ref.support(u)).epsilon(1e-12));
        // bisection radial vs closed-form quadratic
        CHECK(img.radial(u) == doctest::Approx(ref.radial(u)).epsilon(1e-10));
        Vec x = ref.support_point(u);
        CHECK((img.normal_at(x) - ref.normal_at(x)).norm() < 1e-10);
    }
    CHECK(*img.known_volume() ==
          doctest::Approx(std::abs(A.determinant()) * 4.0 * M_PI / 3.0).epsilon(1e-12));
}

TEST_CASE("polar oracle inverts support and radial") {
    Vec axes(3);
    axes << 1.0, 2.0, 3.0;
    auto E = EllipsoidOracle::from_semiaxes(axes);
    PolarOracle P(E);
    double worst = 0.0;
    for (const Vec& u : sphere_dirs(3, 1000)) {
        double lhs = P.radial(u) * E->support(u);
        worst = std::max(worst, std::abs(lhs - 1.0));
        // support of the polar is the gauge of the base
        CHECK(P.support(u) == doctest::Approx(1.0 / E->radial(u)).epsilon(1e-12));
        Vec y = P.support_point(u);
        CHECK(u.dot(y) == doctest::Approx(P.support(u)).epsilon(1e-10));
        // boundary of the polar: support of base equals one there
        CHECK(E->support(y) == doctest::Approx(1.0).epsilon(1e-10));
    }
    CHECK(worst < 1e-10);

    // polar of the polar recovers the base on a smooth centered body
    PolarOracle PP(std::make_shared<PolarOracle>(E));
    for (const Vec& u : sphere_dirs(3, 100, 11)) {
        CHECK(PP.support(u) == doctest::Approx(E->support(u)).epsilon(1e-10));
    }
}

TEST_CASE("convex body facade over a polytope matches exact data") {
    ConvexBody cube = ConvexBody::polytope(make_cube(3).data());
    CHECK(cube.kind() == BodyKind::Polytope);
    CHECK(*cube.exact_volume() == doctest::Approx(8.0));
    CHECK(cube.exact_centroid()->norm() < 1e-15);
    for (const Vec& u : sphere_dirs(3, 100)) {
        double h = std::abs(u(0)) + std::abs(u(1)) + std::abs(u(2));
        double r = 1.0 / u.cwiseAbs().maxCoeff();
        CHECK(cube.support(u) == doctest::Approx(h).epsilon(1e-12));
        CHECK(cube.radial(u) == doctest::Approx(r).epsilon(1e-12));
    }
    Vec inside(3), outside(3);
    inside << 0.9, -0.9, 0.2;
    outside << 1.0 + 1e-6, 0.0, 0.0;
    CHECK(cube.contains(inside));
    CHECK_FALSE(cube.contains(outside));
    Vec facet_pt(3);
    facet_pt << 1.0, 0.2, -0.3;
    Vec nrm = cube.normal_at(facet_pt);
    CHECK((nrm - unit_vector(3, 0)).norm() < 1e-12);
    Vec edge_pt(3);
    edge_pt << 1.0, 1.0, 0.0;
    CHECK_THROWS_AS((void)cube.normal_at(edge_pt), NonUniqueNormalError);
}

TEST_CASE("capped disk: single cut") {
    ConvexBody disk = ConvexBody::smooth(EllipsoidOracle::ball(2, 1.0));
    Halfspace cut{unit_vector(2, 1), 0.9};
    ConvexBody capped = disk.intersect_halfspace(cut);
    CHECK(capped.kind() == BodyKind::Capped);

    CHECK(capped.support(unit_vector(2, 1)) == doctest::Approx(0.9).epsilon(1e-10));
    CHECK(capped.support(unit_vector(2, 0)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(capped.support(-unit_vector(2, 1)) == doctest::Approx(1.0).epsilon(1e-12));

    // corner of the cap: (sqrt(1-0.81), 0.9); directions near e2 see it.
    // The disk's own maximizer in direction u is the point u, which survives
    // the cut iff its height u(1) stays below 0.9; otherwise the corner wins.
    const double cx = std::sqrt(1.0 - 0.81);
    for (double theta : {0.05, 0.15, 0.3, 0.6}) {
        Vec u(2);
        u << std::sin(theta), std::cos(theta);
        double corner = cx * u(0) + 0.9 * u(1);
        double expected = (u(1) <= 0.9) ? 1.0 : corner;
        CHECK(capped.support(u) == doctest::Approx(expected).epsilon(1e-9));
    }

    for (const Vec& u : sphere_dirs(2, 200)) {
        double expected = 1.0;
        if (u(1) > 0.0) expected = std::min(1.0, 0.9 / u(1));
        CHECK(capped.radial(u) == doctest::Approx(expected).epsilon(1e-12));
    }
    check_radial_support_consistency(capped);

    Vec arc_pt(2), cut_pt(2);
    arc_pt << std::cos(-0.4), std::sin(-0.4);
    cut_pt << 0.1, 0.9;
    CHECK((capped.normal_at(arc_pt) - arc_pt).norm() < 1e-9);
    CHECK((capped.normal_at(cut_pt) - unit_vector(2, 1)).norm() < 1e-12);
    Vec corner_pt(2);
    corner_pt << cx, 0.9;
    CHECK_THROWS_AS((void)capped.normal_at(corner_pt), NonUniqueNormalError);
}

TEST_CASE("coned disk: tangent-line radial closed form") {
    ConvexBody disk = ConvexBody::smooth(EllipsoidOracle::ball(2, 1.0));
    Vec apex(2);
    apex << 0.0, 1.2;
    ConvexBody coned = disk.with_point(apex);
    CHECK(coned.kind() == BodyKind::Coned);

    CHECK(coned.radial(unit_vector(2, 1)) == doctest::Approx(1.2).epsilon(1e-10));
    CHECK(coned.radial(unit_vector(2, 0)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(coned.support(unit_vector(2, 1)) == doctest::Approx(1.2).epsilon(1e-12));

    // tangency point T satisfies <T, apex> = 1; the supporting segment from
    // the apex lies on {<x, T> = 1}, so inside the window r(u) = 1 / <u, T>.
    const double ty = 1.0 / 1.2;
    const double tx = std::sqrt(1.0 - ty * ty);
    for (double theta : {0.02, 0.1, 0.2}) {
        for (double side : {1.0, -1.0}) {
            Vec u(2);
            u << side * std::sin(theta), std::cos(theta);
            Vec T(2);
            T << side * tx, ty;
            double expected;
            double window = std::atan2(tx, ty);
            if (theta < window) {
                expected = 1.0 / u.dot(T);
            } else {
                expected = 1.0;
            }
            CHECK(coned.radial(u) == doctest::Approx(expected).epsilon(1e-9));
        }
    }
    check_radial_support_consistency(coned);

    for (const Vec& u : sphere_dirs(2, 100)) {
        CHECK(coned.support(u) ==
              doctest::Approx(std::max(1.0, apex.dot(u))).epsilon(1e-12));
    }
}

TEST_CASE("polarity swaps caps and cones") {
    ConvexBody disk = ConvexBody::smooth(EllipsoidOracle::ball(2, 1.0));
    Halfspace cut{unit_vector(2, 1), 0.9};
    ConvexBody capped = disk.intersect_halfspace(cut);

    ConvexBody polar = capped.polar_dual(Vec::Zero(2));
    CHECK(polar.kind() == BodyKind::Coned);
    REQUIRE(polar.apexes().size() == 1);
    CHECK((polar.apexes()[0] - unit_vector(2, 1) / 0.9).norm() < 1e-14);

    // polar of the coned body comes back as a capped body; double polar
    // restores the original support function
    ConvexBody back = polar.polar_dual(Vec::Zero(2));
    CHECK(back.kind() == BodyKind::Capped);
    for (const Vec& u : sphere_dirs(2, 200)) {
        CHECK(back.support(u) == doctest::Approx(capped.support(u)).epsilon(1e-9));
        // direct duality: radial of the polar is 1 / support of the primal
        CHECK(polar.radial(u) == doctest::Approx(1.0 / capped.support(u)).epsilon(1e-9));
    }
}

TEST_CASE("polar duality in 3d: coned ball against capped polar") {
    ConvexBody ball = ConvexBody::smooth(EllipsoidOracle::ball(3, 1.0));
    Vec apex(3);
    apex << 0.0, 0.0, 1.25;
    ConvexBody coned = ball.with_point(apex);
    ConvexBody polar = coned.polar_dual(Vec::Zero(3));
    CHECK(polar.kind() == BodyKind::Capped);
    for (const Vec& u : sphere_dirs(3, 300)) {
        CHECK(polar.radial(u) == doctest::Approx(1.0 / coned.support(u)).epsilon(1e-9));
        CHECK(coned.radial(u) == doctest::Approx(1.0 / polar.support(u)).epsilon(1e-8));
    }
    check_radial_support_consistency(coned);
    check_radial_support_consistency(polar);
}

TEST_CASE("inclusion reversal under polarity") {
    Vec axes(2);
    axes << 1.4, 1.1;
    ConvexBody small = ConvexBody::smooth(EllipsoidOracle::ball(2, 1.0));
    ConvexBody big = ConvexBody::smooth(EllipsoidOracle::from_semiaxes(axes));
    ConvexBody small_polar = small.polar_dual(Vec::Zero(2));
    ConvexBody big_polar = big.polar_dual(Vec::Zero(2));
    for (const Vec& u : sphere_dirs(2, 100)) {
        CHECK(small.radial(u) <= big.radial(u) + 1e-12);
        CHECK(big_polar.radial(u) <= small_polar.radial(u) + 1e-12);
    }
}

TEST_CASE("off-center polar via translation") {
    // polar of the unit disk about z = (0.5, 0): support along +e1 is
    // 1/(1-0.5) = 2, along -e1 it is 1/(1+0.5)
    ConvexBody disk = ConvexBody::smooth(EllipsoidOracle::ball(2, 1.0));
    Vec z(2);
    z << 0.5, 0.0;
    ConvexBody polar = disk.polar_dual(z);
    CHECK(polar.radial(unit_vector(2, 0)) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(polar.radial(-unit_vector(2, 0)) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    for (const Vec& u : sphere_dirs(2, 100)) {
        // r_polar(u) = 1 / h_{K-z}(u) = 1 / (1 - <z,u>)
        CHECK(polar.radial(u) == doctest::Approx(1.0 / (1.0 - z.dot(u))).epsilon(1e-12));
    }
}

TEST_CASE("centered ellipsoid polar stays closed form") {
    Vec axes(3);
    axes << 0.5, 1.0, 2.0;
    ConvexBody E = ConvexBody::smooth(EllipsoidOracle::from_semiaxes(axes));
    ConvexBody P = E.polar_dual(Vec::Zero(3));
    // |E| * |E^o| for ellipsoids equals kappa_n^2
    auto vE = E.exact_volume();
    auto vP = P.exact_volume();
    REQUIRE(vE.has_value());
    REQUIRE(vP.has_value());
    double kn = unit_ball_volume(3);
    CHECK((*vE) * (*vP) == doctest::Approx(kn * kn).epsilon(1e-12));
    for (const Vec& u : sphere_dirs(3, 100)) {
        CHECK(P.radial(u) == doctest::Approx(1.0 / E.support(u)).epsilon(1e-12));
    }
}

TEST_CASE("body translation and linear image") {
    ConvexBody ball = ConvexBody::smooth(EllipsoidOracle::ball(2, 1.0));
    Vec t(2);
    t << 0.2, -0.1;
    ConvexBody moved = ball.translated(t);
    Mat A(2, 2);
    A << 1.0, 0.5, 0.0, 2.0;
    ConvexBody mapped = ball.linear_image(A);
    for (const Vec& u : sphere_dirs(2, 100)) {
        CHECK(moved.support(u) == doctest::Approx(1.0 + t.dot(u)).epsilon(1e-13));
        CHECK(mapped.support(u) == doctest::Approx((A.transpose() * u).norm()).epsilon(1e-12));
    }
    // capped body transforms consistently: cut plane follows the map
    Halfspace cut{unit_vector(2, 1), 0.9};
    ConvexBody capped = ball.intersect_halfspace(cut);
    ConvexBody capped_moved = capped.translated(t);
    for (const Vec& u : sphere_dirs(2, 100)) {
        CHECK(capped_moved.support(u) ==
              doctest::Approx(capped.support(u) + t.dot(u)).epsilon(1e-9));
    }
    ConvexBody capped_mapped = capped.linear_image(A);
    for (const Vec& u : sphere_dirs(2, 100)) {
        CHECK(capped_mapped.support(u) ==
              doctest::Approx(capped.support(A.transpose() * u)).epsilon(1e-9));
    }
}

TEST_CASE("hull with a point over a polytope is exact") {
    ConvexBody cube = ConvexBody::polytope(make_cube(3).data());
    Vec apex(3);
    apex << 0.0, 0.0, 2.0;
    ConvexBody peaked = cube.with_point(apex);
    CHECK(peaked.is_polytope());
    CHECK(*peaked.exact_volume() == doctest::Approx(8.0 + 4.0 / 3.0).epsilon(1e-15));
    // an interior point changes nothing
    Vec inside(3);
    inside << 0.1, 0.1, 0.1;
    CHECK(*cube.with_point(inside).exact_volume() == doctest::Approx(8.0));
}

TEST_CASE("redundant and empty halfspaces on smooth bodies") {
    ConvexBody ball = ConvexBody::smooth(EllipsoidOracle::ball(2, 1.0));
    ConvexBody same = ball.intersect_halfspace({unit_vector(2, 0), 2.0});
    CHECK(same.kind() == BodyKind::Smooth);
    CHECK_THROWS_AS(
        (void)ball.intersect_halfspace({unit_vector(2, 0), -1.5}), GeometryError);
    // multi-cut support: two caps at right angles
    ConvexBody twice = ball.intersect_halfspace({unit_vector(2, 0), 0.8})
                           .intersect_halfspace({unit_vector(2, 1), 0.8});
    CHECK(twice.cuts().size() == 2);
    CHECK(twice.support(unit_vector(2, 0)) == doctest::Approx(0.8).epsilon(1e-9));
    CHECK(twice.support(unit_vector(2, 1)) == doctest::Approx(0.8).epsilon(1e-9));
    Vec diag(2);
    diag << M_SQRT1_2, M_SQRT1_2;
    // corner (0.8, 0.6) from cut 1 and arc: candidates corner (0.8,0.6),
    // (0.6,0.8) and the diagonal arc point; the arc point (s,s) with s=1/sqrt2
    // satisfies both cuts, so support is unchanged
    CHECK(twice.support(diag) == doctest::Approx(1.0).epsilon(1e-9));
    check_radial_support_consistency(twice);
}

TEST_CASE("smooth body exactness flags") {
    ConvexBody ball = ConvexBody::smooth(EllipsoidOracle::ball(3, 2.0));
    CHECK(*ball.exact_volume() ==
          doctest::Approx(unit_ball_volume(3) * 8.0).epsilon(1e-13));
    CHECK(ball.exact_centroid()->norm() < 1e-15);
    ConvexBody capped = ball.intersect_halfspace({unit_vector(3, 2), 1.9});
    CHECK_FALSE(capped.exact_volume().has_value());
}

TEST_CASE("coned body membership via radial") {
    ConvexBody ball = ConvexBody::smooth(EllipsoidOracle::ball(3, 1.0));
    Vec apex(3);
    apex << 0.0, 0.0, 1.1;
    ConvexBody coned = ball.with_point(apex);
    CHECK(coned.contains(apex * (1.0 - 1e-9)));
    CHECK_FALSE(coned.contains(apex * (1.0 + 1e-9)));
    Vec side(3);
    side << 0.99, 0.0, 0.0;
    CHECK(coned.contains(side));
}
