#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "vplab/body.hpp"
#include "vplab/curvature.hpp"
#include "vplab/errors.hpp"
#include "vplab/perturb.hpp"
#include "vplab/sampling.hpp"
#include "vplab/santalo.hpp"
#include "vplab/smooth.hpp"
#include "vplab/volume.hpp"

using namespace vplab;

namespace {

// circular segment of the unit disk cut at height h below the top
double segment2(double h) {
    return std::acos(1.0 - h) - (1.0 - h) * std::sqrt(2.0 * h - h * h);
}

// area gained by conv(unit disk, (1+d) e): two tangent triangles minus the
// circular sector between the tangency points
double kite2(double d) {
    return std::sqrt(2.0 * d + d * d) - std::acos(1.0 / (1.0 + d));
}

ConvexBody unit_disk() { return ConvexBody::smooth(EllipsoidOracle::ball(2, 1.0)); }

std::vector<Vec> sphere_dirs(int n, int count) {
    std::vector<Vec> dirs;
    Sobol sob(n, 99, 0);
    double pt[8];
    for (int i = 0; i < count; ++i) {
        sob.next(pt);
        dirs.push_back(cube_to_sphere(pt, n));
    }
    return dirs;
}

}  // namespace

TEST_CASE("perturbation descriptor validation") {
    ConvexBody disk = unit_disk();
    Vec e2 = unit_vector(2, 1);
    Perturbation p = make_perturbation(disk, e2, 0.25, PerturbKind::CapCut);
    CHECK((p.N - e2).norm() < 1e-12);
    CHECK(p.delta == 0.25);

    CHECK_THROWS_AS((void)make_perturbation(disk, 0.5 * e2, 0.1, PerturbKind::CapCut),
                    GeometryError);
    CHECK_THROWS_AS((void)make_perturbation(disk, e2, -0.1, PerturbKind::CapCut),
                    GeometryError);
    // a cut of depth 2 removes the whole disk
    CHECK_THROWS_AS((void)make_perturbation(disk, e2, 2.0, PerturbKind::CapCut),
                    GeometryError);
    // the cone height has no such bound
    CHECK_NOTHROW((void)make_perturbation(disk, e2, 2.0, PerturbKind::ConeAdd));
    CHECK_THROWS_AS((void)cap_cut(disk, make_perturbation(disk, e2, 0.5,
                                                          PerturbKind::ConeAdd)),
                    GeometryError);
}

TEST_CASE("cap cut volumes") {
    ConvexBody disk = unit_disk();
    Vec e2 = unit_vector(2, 1);

    ConvexBody capped = cap_cut(disk, e2, 0.01);
    CHECK(capped.kind() == BodyKind::Capped);
    const double expect = M_PI - segment2(0.01);
    VolumeEstimate est = best_volume(capped, 400000, 11);
    CHECK(std::abs(est.value - expect) < 4.0 * est.std_error + 1e-12);

    // exact polytope path: cube [-1,1]^3 loses a slab of height 1/2
    ConvexBody cube = ConvexBody::polytope(make_cube(3).data());
    ConvexBody boxed = cap_cut(cube, unit_vector(3, 2), 0.5);
    CHECK(boxed.is_polytope());
    CHECK(boxed.exact_volume().value() == doctest::Approx(6.0).epsilon(1e-12));

    // delta = 0 is the identity
    ConvexBody same = cap_cut(disk, e2, 0.0);
    CHECK(same.kind() == BodyKind::Smooth);
    for (const Vec& u : sphere_dirs(2, 32)) {
        CHECK(same.support(u) == disk.support(u));
    }
}

TEST_CASE("cone add volumes") {
    ConvexBody disk = unit_disk();
    Vec e2 = unit_vector(2, 1);

    ConvexBody coned = cone_add(disk, e2, 0.1);
    CHECK(coned.kind() == BodyKind::Coned);
    const double expect = M_PI + kite2(0.1);
    VolumeEstimate est = best_volume(coned, 400000, 12);
    CHECK(std::abs(est.value - expect) < 4.0 * est.std_error + 1e-12);

    ConvexBody cube = ConvexBody::polytope(make_cube(3).data());
    ConvexBody peaked = cone_add(cube, unit_vector(3, 2), 1.0);
    CHECK(peaked.is_polytope());
    CHECK(peaked.exact_volume().value() == doctest::Approx(28.0 / 3.0).epsilon(1e-12));

    ConvexBody same = cone_add(disk, e2, 0.0);
    CHECK(same.kind() == BodyKind::Smooth);
}

TEST_CASE("perturbations commute with rotations") {
    ConvexBody E = ConvexBody::smooth(EllipsoidOracle::from_semiaxes(
        (Vec(2) << 2.0, 1.0).finished()));
    Vec x0(2);
    x0 << 2.0, 0.0;
    const double c = std::cos(0.7), s = std::sin(0.7);
    Mat R(2, 2);
    R << c, -s, s, c;

    ConvexBody lhs_cap = cap_cut(E, x0, 0.05).linear_image(R);
    ConvexBody rhs_cap = cap_cut(E.linear_image(R), R * x0, 0.05);
    ConvexBody lhs_cone = cone_add(E, x0, 0.05).linear_image(R);
    ConvexBody rhs_cone = cone_add(E.linear_image(R), R * x0, 0.05);
    for (const Vec& u : sphere_dirs(2, 100)) {
        CHECK(std::abs(lhs_cap.support(u) - rhs_cap.support(u)) < 1e-12);
        CHECK(std::abs(lhs_cone.support(u) - rhs_cone.support(u)) < 1e-12);
    }
}

TEST_CASE("polar of a cap is a cone over the polar") {
    for (int n : {2, 3}) {
        ConvexBody ball = ConvexBody::smooth(EllipsoidOracle::ball(n, 1.0));
        Vec x = unit_vector(n, n - 1);
        for (double d : {0.01, 0.05, 0.1}) {
            CHECK(dual_of_cap_identity(ball, x, d) < 1e-9);
        }
        CHECK(dual_of_cap_identity(ball, x, 0.0) == 0.0);
    }
    ConvexBody disk = unit_disk();
    CHECK_THROWS_AS((void)dual_of_cap_identity(disk, unit_vector(2, 1), 1.0),
                    GeometryError);
}

TEST_CASE("polar-cap identity on a normalized body") {
    // lp ball normalized at a diagonal point: the image is a genuine affine
    // oracle, so the two sides travel different evaluation paths
    ConvexBody lp = ConvexBody::smooth(std::make_shared<LpBallOracle>(2, 4.0, 1.0));
    Vec dir(2);
    dir << 1.0, 2.0;
    dir.normalize();
    Vec x0 = lp.radial(dir) * dir;
    NormalizationResult nr = normalize_at_point(lp, x0, 100000, 3);
    ConvexBody img = lp.linear_image(nr.map);
    for (double d : {0.01, 0.05, 0.1, 0.2}) {
        CHECK(dual_of_cap_identity(img, nr.image_point, d) < 1e-6);
    }
}

TEST_CASE("dual cap radius law") {
    // plug-in example at the self-dual point
    CHECK(dual_cap_radius(1.0, 0.0, 0.02) ==
          doctest::Approx(std::sqrt(0.04 - 0.0004)).epsilon(1e-15));

    // at r=1, eps=0 the radius and the comparator are the same expression
    for (int i = 1; i <= 50; ++i) {
        const double d = 0.5 * i / 50.0;
        CHECK(dual_cap_radius(1.0, 0.0, d) == dual_cap_comparator(1.0, 0.0, d));
    }

    // admissibility threshold: the second bound is the binding one
    const double r = 2.0, eps = 0.1;
    const double t1 = 2.0 * eps / ((r - 2.0 * eps) * (r - eps));
    const double t2 = 2.0 * eps / ((r - 2.0 * eps) * (2.0 + r - eps));
    const double thresh = dual_cap_admissible_delta(r, eps);
    CHECK(thresh == doctest::Approx(std::min(t1, t2)).epsilon(1e-15));
    CHECK(t2 < t1);
    for (int i = 1; i <= 40; ++i) {
        const double d = thresh * i / 40.0;
        CHECK(dual_cap_radius(r, eps, d) <= dual_cap_comparator(r, eps, d));
    }
    // same check at the self-dual radius with a wide margin
    const double th1 = dual_cap_admissible_delta(1.0, 0.05);
    for (int i = 1; i <= 40; ++i) {
        const double d = th1 * i / 40.0;
        CHECK(dual_cap_radius(1.0, 0.05, d) <= dual_cap_comparator(1.0, 0.05, d));
    }

    CHECK_THROWS_AS((void)dual_cap_comparator(1.0, 0.0, 3.0), GeometryError);
    CHECK_THROWS_AS((void)dual_cap_radius(1.0, 1.2, 0.01), GeometryError);
    CHECK_THROWS_AS((void)dual_cap_admissible_delta(1.0, 0.6), GeometryError);
}

TEST_CASE("sandwich certification on balls") {
    for (int n : {2, 3}) {
        ConvexBody ball = ConvexBody::smooth(EllipsoidOracle::ball(n, 1.0));
        const double certified =
            dual_cap_sandwich_check(ball, unit_vector(n, n - 1), 1.0, 0.05);
        CHECK(certified == doctest::Approx(0.95).epsilon(1e-12));
    }
}

TEST_CASE("sandwich certification on a normalized body") {
    ConvexBody lp = ConvexBody::smooth(std::make_shared<LpBallOracle>(2, 4.0, 1.0));
    Vec dir(2);
    dir << 2.0, 1.0;
    dir.normalize();
    Vec x0 = lp.radial(dir) * dir;
    NormalizationResult nr = normalize_at_point(lp, x0, 100000, 4);
    ConvexBody img = lp.linear_image(nr.map);
    const double certified =
        dual_cap_sandwich_check(img, nr.image_point, nr.ball_radius, 0.05, 64);
    CHECK(certified > 1e-4);
    CHECK(certified < 1.0);

    ConvexBody ball = unit_disk();
    CHECK_THROWS_AS(
        (void)dual_cap_sandwich_check(ball, unit_vector(2, 1), 1.0, 1.5),
        GeometryError);
    CHECK_THROWS_AS(
        (void)dual_cap_sandwich_check(ball, unit_vector(2, 1), 1.0, 0.0),
        GeometryError);
    // wrong curvature radius fails the indicatrix certificate
    CHECK_THROWS_AS(
        (void)dual_cap_sandwich_check(ball, unit_vector(2, 1), 2.0, 0.05),
        GeometryError);
}

TEST_CASE("sufficient inequalities at leading order") {
    // unit 3-ball with a tiny margin: both inequalities hold with huge slack
    const double v3 = 4.0 * M_PI / 3.0;
    TheoremRow row = theorem_inequalities(v3, v3, 1.0, 1e-3, 1e-4, 3);
    const double b1 = 4.0 * 1.001 * 1.001 - 3.0 * 0.999 * 0.999;
    CHECK(row.ineq1_lhs == doctest::Approx(v3 * b1).epsilon(1e-14));
    CHECK(row.ineq1_rhs == doctest::Approx(3.0 * v3 * 0.999).epsilon(1e-14));
    CHECK(row.ineq2_lhs == doctest::Approx(row.ineq1_lhs).epsilon(1e-14));
    CHECK(row.ineq2_rhs == doctest::Approx(row.ineq1_rhs).epsilon(1e-14));
    CHECK(row.winner == Winner::Both);
    CHECK_FALSE(row.contradiction_bound);

    // the degenerate bound 4 >= n^2 only survives in the plane
    CHECK(theorem_inequalities(M_PI, M_PI, 1.0, 1e-3, 1e-4, 2).contradiction_bound);

    // lopsided volumes tip the winner to one side
    CHECK(theorem_inequalities(10.0, 0.1, 1.0, 1e-3, 1e-3, 2).winner ==
          Winner::Cone);
    CHECK(theorem_inequalities(0.1, 10.0, 1.0, 1e-3, 1e-3, 2).winner ==
          Winner::Cap);
    // a huge margin violates both sufficient conditions: neither certified
    CHECK(theorem_inequalities(1.0, 1.0, 1.0, 0.9, 1e-3, 2).winner ==
          Winner::Neither);
    CHECK(winner_name(Winner::Both) == std::string("both"));
}

TEST_CASE("volume product decrease on the disk, exact path") {
    ConvexBody disk = unit_disk();
    TheoremDiagnostics diag =
        verify_theorem(disk, unit_vector(2, 1), {1e-2, 1e-3, 1e-4});
    CHECK(diag.exact_path);
    CHECK(diag.vp_base == doctest::Approx(M_PI * M_PI).epsilon(1e-15));
    CHECK(diag.vp_base_stderr == 0.0);
    CHECK(diag.all_decrease);
    REQUIRE(diag.rows.size() == 3);
    for (const TheoremRow& row : diag.rows) {
        CHECK(row.winner == Winner::Both);
        CHECK(row.decrease > 0.0);
        CHECK(row.vp_cap < diag.vp_base);
        CHECK(row.vp_cone < diag.vp_base);
    }
    // row values against the independent segment/kite forms
    const double d = 1e-2;
    const double vp_cap = (M_PI - segment2(d)) * (M_PI + kite2(d / (1.0 - d)));
    const double vp_cone = (M_PI + kite2(d)) * (M_PI - segment2(d / (1.0 + d)));
    CHECK(diag.rows[0].vp_cap == doctest::Approx(vp_cap).epsilon(1e-11));
    CHECK(diag.rows[0].vp_cone == doctest::Approx(vp_cone).epsilon(1e-11));

    CHECK(diag.fitted_exponent == doctest::Approx(1.5).epsilon(0.07));
    const double c_star = 2.0 * std::sqrt(2.0) * M_PI / 3.0;
    CHECK(std::abs(diag.fitted_constant - c_star) < 0.05 * c_star);
}

TEST_CASE("volume product decrease on the 3-ball, exact path") {
    ConvexBody ball = ConvexBody::smooth(EllipsoidOracle::ball(3, 1.0));
    TheoremDiagnostics diag =
        verify_theorem(ball, unit_vector(3, 2), {1e-2, 1e-3, 1e-4});
    CHECK(diag.exact_path);
    CHECK(diag.all_decrease);
    CHECK(diag.fitted_exponent == doctest::Approx(2.0).epsilon(0.05));
    for (const TheoremRow& row : diag.rows) {
        CHECK(row.winner == Winner::Both);
        CHECK_FALSE(row.contradiction_bound);
    }
}

TEST_CASE("symmetric double cap keeps the symmetry and still loses") {
    // cut the disk at both poles: the class of 0-symmetric bodies is closed
    // under the symmetric perturbation pair
    const double d = 0.05;
    ConvexBody disk = unit_disk();
    Vec e2 = unit_vector(2, 1);
    ConvexBody sym = cap_cut(cap_cut(disk, e2, d), -e2, d);
    for (const Vec& u : sphere_dirs(2, 64)) {
        CHECK(sym.support(u) == doctest::Approx(sym.support(-u)).epsilon(1e-12));
    }
    ConvexBody sym_polar = sym.polar_dual(Vec::Zero(2));
    // exact areas: two disjoint segments off, two disjoint tangent kites on
    const double vol = M_PI - 2.0 * segment2(d);
    const double vol_polar = M_PI + 2.0 * kite2(d / (1.0 - d));
    VolumeEstimate est = best_volume(sym, 400000, 21);
    VolumeEstimate est_polar = best_volume(sym_polar, 400000, 22);
    CHECK(std::abs(est.value - vol) < 4.0 * est.std_error + 1e-12);
    CHECK(std::abs(est_polar.value - vol_polar) < 4.0 * est_polar.std_error + 1e-12);
    CHECK(vol * vol_polar < M_PI * M_PI);
}

TEST_CASE("volume product decrease through the sampled pipeline") {
    // ellipse (2,1) normalized at its sharp vertex, exact path disabled
    ConvexBody E = ConvexBody::smooth(EllipsoidOracle::from_semiaxes(
        (Vec(2) << 2.0, 1.0).finished()));
    Vec x0(2);
    x0 << 2.0, 0.0;
    VpEstimate base = volume_product(E, Vec::Zero(2), 200000, 31);
    NormalizationResult nr = normalize_at_point(E, x0, 200000, 32);
    ConvexBody img = E.linear_image(nr.map);
    TheoremDiagnostics diag = verify_theorem(img, nr.image_point, {1e-2, 1e-3},
                                             1e-3, 400000, 33, 0, false);
    CHECK_FALSE(diag.exact_path);
    // vp is invariant under the normalizing map; the image is a disk in
    // disguise, so vp_base must sit on pi^2 within MC noise
    CHECK(std::abs(diag.vp_base - M_PI * M_PI) <
          5.0 * diag.vp_base_stderr + 1e-9);
    CHECK(std::abs(diag.vp_base - base.value) <
          5.0 * std::hypot(diag.vp_base_stderr, base.std_error) + 1e-9);
    CHECK(diag.all_decrease);
    for (const TheoremRow& row : diag.rows) {
        CHECK(row.winner != Winner::Neither);
        CHECK(row.decrease > 4.0 * row.decrease_stderr);
    }
}

TEST_CASE("identity perturbation is inconclusive") {
    ConvexBody lp = ConvexBody::smooth(std::make_shared<LpBallOracle>(2, 4.0, 1.0));
    Vec dir(2);
    dir << 1.0, 1.0;
    dir.normalize();
    Vec x0 = lp.radial(dir) * dir;
    NormalizationResult nr = normalize_at_point(lp, x0, 50000, 8);
    ConvexBody img = lp.linear_image(nr.map);
    CHECK_THROWS_AS((void)verify_theorem(img, nr.image_point, {0.0}, 1e-3, 20000,
                                         9, 0, false),
                    InconclusiveError);
}
