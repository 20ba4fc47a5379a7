#pragma once

#include <string>

#include <json.hpp>

#include "vplab/body.hpp"
#include "vplab/curvature.hpp"
#include "vplab/perturb.hpp"
#include "vplab/santalo.hpp"
#include "vplab/volume.hpp"

namespace vplab {

inline constexpr int kSchemaVersion = 1;

// Raised on structurally valid JSON that does not describe a body.
struct BodyParseError : std::runtime_error {
    explicit BodyParseError(const std::string& msg) : std::runtime_error(msg) {}
};

// Canonical float form used in CSV cells: 17 significant digits, round-trip
// exact for doubles.
std::string format_float(double v);

// Body schema: {"dim": n, "kind": ..., kind-specific fields}. Kinds:
//   vpolytope {vertices}, hpolytope {normals, offsets [, interior_point]},
//   ball {radius [, center]}, ellipsoid {semiaxes | matrix [, center]},
//   lp_ball {p [, radius]}, cube {[halfwidth]}, cross_polytope {[radius]},
//   simplex {} (conv of 0 and the basis vectors),
//   capped {base, cuts: [{normal, offset}]}, coned {base, apexes}.
ConvexBody body_from_json(const nlohmann::json& j);
ConvexBody load_body(const std::string& path);
nlohmann::json body_to_json(const ConvexBody& body);

nlohmann::json to_json(const VolumeEstimate& est);
nlohmann::json to_json(const VpEstimate& est);
nlohmann::json to_json(const VolumeProductReport& report);
nlohmann::json to_json(const IndicatrixReport& report);
nlohmann::json to_json(const NormalizationResult& result);

// One row per delta:
// delta,vp_cap,vp_cap_stderr,vp_cone,vp_cone_stderr,decrease,decrease_stderr,
// winner,ineq1_lhs,ineq1_rhs,ineq2_lhs,ineq2_rhs
std::string theorem_csv(const TheoremDiagnostics& diag);
nlohmann::json theorem_summary_json(const TheoremDiagnostics& diag);

// Columns: t,measured,leading,ratio
std::string modulus_csv(const EmpiricalModulus& grid);

// Minimal line plot of ratio against log10(t), one polyline per grid.
std::string modulus_svg(const std::vector<std::string>& names,
                        const std::vector<EmpiricalModulus>& grids);

} // namespace vplab
