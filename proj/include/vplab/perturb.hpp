#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "vplab/body.hpp"
#include "vplab/volume.hpp"

namespace vplab {

enum class PerturbKind { CapCut, ConeAdd };

// Boundary perturbation descriptor: cut the cap of height delta below x, or
// glue the cone with apex delta above x, both along the outer normal at x.
struct Perturbation {
    Vec x;
    Vec N;
    double delta = 0.0;
    PerturbKind kind = PerturbKind::CapCut;
};

// Validates that x lies on the boundary (within 1e-9 relative), fills in the
// outer normal, and for cap cuts checks the cut leaves an interior.
// delta = 0 is allowed and makes both operators the identity.
Perturbation make_perturbation(const ConvexBody& body, const Vec& x,
                               double delta, PerturbKind kind);

// K intersected with {y : <y,N> <= <x,N> - delta}.
ConvexBody cap_cut(const ConvexBody& body, const Perturbation& p);
ConvexBody cap_cut(const ConvexBody& body, const Vec& x, double delta);

// conv(K, x + delta N).
ConvexBody cone_add(const ConvexBody& body, const Perturbation& p);
ConvexBody cone_add(const ConvexBody& body, const Vec& x, double delta);

// For a body normalized at x (unit x, N(x) = x, 0 interior), the polar of the
// cap cut at height delta is the cone body over the polar with apex height
// delta/(1-delta). Returns the max over quasi-random directions of the
// support gap between the two constructions.
double dual_of_cap_identity(const ConvexBody& normalized, const Vec& x,
                            double delta, int directions = 500);

// Radius of the polar cap produced by a primal cap of polar height
// delta_polar when the body sits between balls of curvature radius r -+ eps.
double dual_cap_radius(double r, double eps, double delta_polar);

// The chord half-width of the comparison ball of radius 1/(r - 2 eps).
double dual_cap_comparator(double r, double eps, double delta_polar);

// Largest delta_polar for which dual_cap_radius is guaranteed to stay below
// the comparator: min of 2eps/((r-2eps)(r-eps)) and 2eps/((r-2eps)(2+r-eps)).
double dual_cap_admissible_delta(double r, double eps);

// Certifies the two-sided ball sandwich of the polar body near x: the polar
// cap of depth t must contain the cap of the inner ball (radius 1/r - eps)
// and sit inside the cap of the outer ball (radius 1/r + eps), both tangent
// at x. Slices are compared by radial functions at `heights` depths and
// `slice_directions` tangent directions; the largest certified depth is
// found by bisection.
double dual_cap_sandwich_check(const ConvexBody& normalized, const Vec& x,
                               double r, double eps,
                               int slice_directions = 128, int heights = 8);

enum class Winner { Cap, Cone, Both, Neither };
const char* winner_name(Winner w);

struct TheoremRow {
    double delta = 0.0;
    double vp_cap = std::numeric_limits<double>::quiet_NaN();
    double vp_cap_stderr = 0.0;
    double vp_cone = std::numeric_limits<double>::quiet_NaN();
    double vp_cone_stderr = 0.0;
    // vp_base - min(vp_cap, vp_cone) and the MC error of that difference
    double decrease = std::numeric_limits<double>::quiet_NaN();
    double decrease_stderr = 0.0;
    double ineq1_lhs = 0.0, ineq1_rhs = 0.0;
    double ineq2_lhs = 0.0, ineq2_rhs = 0.0;
    Winner winner = Winner::Neither;
    bool contradiction_bound = false;  // 4 >= n^2 at unit moduli
};

// Leading-order evaluation of the two sufficient inequalities at curvature
// radius r and diagnostic margin eps (unit moduli convention). The winner
// field reports which inequality holds strictly; vp fields stay NaN.
TheoremRow theorem_inequalities(double vol_k, double vol_k_polar, double r,
                                double eps, double delta, int n);

struct TheoremDiagnostics {
    int n = 0;
    double vp_base = 0.0;
    double vp_base_stderr = 0.0;
    std::vector<TheoremRow> rows;       // in delta_grid order
    double fitted_exponent = std::numeric_limits<double>::quiet_NaN();
    double fitted_constant = std::numeric_limits<double>::quiet_NaN();
    bool exact_path = false;
    bool all_decrease = false;          // every row beat vp_base by 4 sigma
};

// Volume-product decrease study at a normalized positive-curvature point.
// For each delta the cap-cut and cone-add bodies are built and their volume
// products (polars at 0) measured; unit balls go through closed forms, all
// other bodies through one common-random-numbers radial stream so the
// difference to vp_base carries far less noise than the values themselves.
// Throws InconclusiveError if no grid point resolves a 4 sigma decision.
TheoremDiagnostics verify_theorem(const ConvexBody& normalized, const Vec& x0,
                                  const std::vector<double>& delta_grid,
                                  double eps_diag = 1e-3,
                                  std::uint64_t samples = 2000000,
                                  std::uint64_t seed = 20240601,
                                  int jobs = 0, bool allow_exact = true);

} // namespace vplab
