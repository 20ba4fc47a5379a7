#include "vplab/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "vplab/errors.hpp"
#include "vplab/smooth.hpp"

namespace vplab {

using nlohmann::json;

std::string format_float(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

Vec vec_from_json(const json& j, const char* what) {
    if (!j.is_array() || j.empty())
        throw BodyParseError(std::string(what) + " must be a nonempty array");
    Vec v(static_cast<int>(j.size()));
    for (int i = 0; i < v.size(); ++i) {
        if (!j[i].is_number())
            throw BodyParseError(std::string(what) + " entries must be numbers");
        v(i) = j[i].get<double>();
    }
    return v;
}

json vec_to_json(const Vec& v) {
    json a = json::array();
    for (int i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
}

json mat_to_json(const Mat& m) {
    json rows = json::array();
    for (int i = 0; i < m.rows(); ++i) rows.push_back(vec_to_json(m.row(i)));
    return rows;
}

int dim_field(const json& j) {
    if (!j.contains("dim") || !j["dim"].is_number_integer())
        throw BodyParseError("body needs an integer \"dim\" field");
    const int n = j["dim"].get<int>();
    if (n < 1 || n > 6) throw BodyParseError("dim must lie in [1, 6]");
    return n;
}

double number_field(const json& j, const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number())
        throw BodyParseError(std::string(key) + " must be a number");
    return j[key].get<double>();
}

ConvexBody parse_vpolytope(const json& j, int n) {
    if (!j.contains("vertices") || !j["vertices"].is_array())
        throw BodyParseError("vpolytope needs a \"vertices\" array");
    std::vector<RatVec> pts;
    for (const json& row : j["vertices"]) {
        Vec v = vec_from_json(row, "vertex");
        if (v.size() != n) throw BodyParseError("vertex dimension mismatch");
        pts.push_back(to_rat(v));
    }
    return ConvexBody::polytope(build_polytope(std::move(pts)));
}

ConvexBody parse_hpolytope(const json& j, int n) {
    if (!j.contains("normals") || !j.contains("offsets"))
        throw BodyParseError("hpolytope needs \"normals\" and \"offsets\"");
    const json& normals = j["normals"];
    const json& offsets = j["offsets"];
    if (!normals.is_array() || !offsets.is_array() ||
        normals.size() != offsets.size())
        throw BodyParseError("normals/offsets must be arrays of equal length");
    std::vector<Halfspace> hs;
    for (std::size_t i = 0; i < normals.size(); ++i) {
        Vec a = vec_from_json(normals[i], "normal");
        if (a.size() != n) throw BodyParseError("normal dimension mismatch");
        if (!offsets[i].is_number())
            throw BodyParseError("offsets entries must be numbers");
        hs.push_back({a, offsets[i].get<double>()});
    }
    Vec z = j.contains("interior_point")
                ? vec_from_json(j["interior_point"], "interior_point")
                : Vec(Vec::Zero(n));
    if (z.size() != n) throw BodyParseError("interior_point dimension mismatch");
    return ConvexBody::polytope(HPolytope(hs, z).data());
}

ConvexBody parse_ellipsoid(const json& j, int n) {
    Vec center = j.contains("center") ? vec_from_json(j["center"], "center")
                                      : Vec(Vec::Zero(n));
    if (center.size() != n) throw BodyParseError("center dimension mismatch");
    if (j.contains("semiaxes")) {
        Vec a = vec_from_json(j["semiaxes"], "semiaxes");
        if (a.size() != n) throw BodyParseError("semiaxes dimension mismatch");
        auto oracle = EllipsoidOracle::from_semiaxes(a);
        return ConvexBody::smooth(oracle).translated(center);
    }
    if (j.contains("matrix")) {
        const json& rows = j["matrix"];
        if (!rows.is_array() || static_cast<int>(rows.size()) != n)
            throw BodyParseError("matrix must have dim rows");
        Mat M(n, n);
        for (int i = 0; i < n; ++i) {
            Vec r = vec_from_json(rows[i], "matrix row");
            if (r.size() != n) throw BodyParseError("matrix must be square");
            M.row(i) = r;
        }
        return ConvexBody::smooth(std::make_shared<EllipsoidOracle>(M, center));
    }
    throw BodyParseError("ellipsoid needs \"semiaxes\" or \"matrix\"");
}

ConvexBody parse_body(const json& j) {
    if (!j.is_object()) throw BodyParseError("body must be a JSON object");
    const int n = dim_field(j);
    if (!j.contains("kind") || !j["kind"].is_string())
        throw BodyParseError("body needs a string \"kind\" field");
    const std::string kind = j["kind"].get<std::string>();

    if (kind == "vpolytope") return parse_vpolytope(j, n);
    if (kind == "hpolytope") return parse_hpolytope(j, n);
    if (kind == "ball") {
        const double r = number_field(j, "radius", 1.0);
        if (!(r > 0.0)) throw BodyParseError("ball radius must be positive");
        ConvexBody b = ConvexBody::smooth(EllipsoidOracle::ball(n, r));
        if (j.contains("center"))
            return b.translated(vec_from_json(j["center"], "center"));
        return b;
    }
    if (kind == "ellipsoid") return parse_ellipsoid(j, n);
    if (kind == "lp_ball") {
        const double p = number_field(j, "p", 4.0);
        const double r = number_field(j, "radius", 1.0);
        if (!(p > 1.0)) throw BodyParseError("lp_ball needs p > 1");
        if (!(r > 0.0)) throw BodyParseError("lp_ball radius must be positive");
        return ConvexBody::smooth(std::make_shared<LpBallOracle>(n, p, r));
    }
    if (kind == "cube")
        return ConvexBody::polytope(
            make_cube(n, number_field(j, "halfwidth", 1.0)).data());
    if (kind == "cross_polytope")
        return ConvexBody::polytope(
            make_cross_polytope(n, number_field(j, "radius", 1.0)).data());
    if (kind == "simplex") return ConvexBody::polytope(make_simplex(n).data());
    if (kind == "capped" || kind == "coned") {
        if (!j.contains("base"))
            throw BodyParseError(kind + " needs a \"base\" body");
        ConvexBody body = parse_body(j["base"]);
        if (body.dim() != n) throw BodyParseError("base dimension mismatch");
        if (kind == "capped") {
            if (!j.contains("cuts") || !j["cuts"].is_array())
                throw BodyParseError("capped needs a \"cuts\" array");
            for (const json& c : j["cuts"]) {
                if (!c.is_object() || !c.contains("normal") || !c.contains("offset"))
                    throw BodyParseError("cut needs \"normal\" and \"offset\"");
                Vec a = vec_from_json(c["normal"], "cut normal");
                if (a.size() != n) throw BodyParseError("cut dimension mismatch");
                if (!c["offset"].is_number())
                    throw BodyParseError("cut offset must be a number");
                body = body.intersect_halfspace({a, c["offset"].get<double>()});
            }
        } else {
            if (!j.contains("apexes") || !j["apexes"].is_array())
                throw BodyParseError("coned needs an \"apexes\" array");
            for (const json& a : j["apexes"]) {
                Vec p = vec_from_json(a, "apex");
                if (p.size() != n) throw BodyParseError("apex dimension mismatch");
                body = body.with_point(p);
            }
        }
        return body;
    }
    throw BodyParseError("unknown body kind: " + kind);
}

}  // namespace

ConvexBody body_from_json(const json& j) { return parse_body(j); }

ConvexBody load_body(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw BodyParseError("cannot open body file: " + path);
    json j = json::parse(in);
    return parse_body(j);
}

json body_to_json(const ConvexBody& body) {
    const int n = body.dim();
    json j;
    j["dim"] = n;
    switch (body.kind()) {
        case BodyKind::Polytope: {
            j["kind"] = "vpolytope";
            json verts = json::array();
            for (const Vec& v : body.polytope_data()->vertices)
                verts.push_back(vec_to_json(v));
            j["vertices"] = verts;
            return j;
        }
        case BodyKind::Smooth: {
            const SmoothPtr& o = body.smooth_oracle();
            if (auto ell = std::dynamic_pointer_cast<const EllipsoidOracle>(o)) {
                j["kind"] = "ellipsoid";
                j["matrix"] = mat_to_json(ell->quadratic_form());
                j["center"] = vec_to_json(ell->center());
                return j;
            }
            if (auto lp = std::dynamic_pointer_cast<const LpBallOracle>(o)) {
                j["kind"] = "lp_ball";
                j["p"] = lp->p();
                j["radius"] = lp->radius();
                return j;
            }
            throw BodyParseError("this smooth oracle has no JSON form");
        }
        case BodyKind::Capped: {
            ConvexBody base = ConvexBody::smooth(body.smooth_oracle());
            j = body_to_json(base);
            json wrapper;
            wrapper["dim"] = n;
            wrapper["kind"] = "capped";
            wrapper["base"] = j;
            json cuts = json::array();
            for (const Halfspace& h : body.cuts()) {
                json c;
                c["normal"] = vec_to_json(h.normal);
                c["offset"] = h.offset;
                cuts.push_back(c);
            }
            wrapper["cuts"] = cuts;
            return wrapper;
        }
        case BodyKind::Coned: {
            ConvexBody base = ConvexBody::smooth(body.smooth_oracle());
            j = body_to_json(base);
            json wrapper;
            wrapper["dim"] = n;
            wrapper["kind"] = "coned";
            wrapper["base"] = j;
            json apexes = json::array();
            for (const Vec& a : body.apexes()) apexes.push_back(vec_to_json(a));
            wrapper["apexes"] = apexes;
            return wrapper;
        }
    }
    throw BodyParseError("unhandled body kind");
}

json to_json(const VolumeEstimate& est) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["value"] = est.value;
    j["method"] = volume_method_name(est.method);
    j["stderr"] = est.std_error;
    j["samples"] = est.samples;
    return j;
}

json to_json(const VpEstimate& est) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["value"] = est.value;
    j["stderr"] = est.std_error;
    return j;
}

json to_json(const VolumeProductReport& report) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["vp_at_origin"] = report.vp_at_origin;
    j["santalo_point"] = vec_to_json(report.santalo_point);
    j["vp_at_santalo"] = report.vp_at_santalo;
    j["vp_stderr"] = report.vp_std_error;
    j["normalized_vp"] = report.normalized_vp;
    j["iterations"] = report.iterations;
    return j;
}

json to_json(const IndicatrixReport& report) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["point"] = vec_to_json(report.point);
    j["normal"] = vec_to_json(report.normal);
    j["tangent_frame"] = mat_to_json(report.tangent_frame);
    j["eigenvalues"] = vec_to_json(report.eigenvalues);
    j["eigenvectors"] = mat_to_json(report.eigenvectors);
    j["axes_b"] = vec_to_json(report.axes_b);
    j["approximating_ellipsoid"] = vec_to_json(approximating_ellipsoid(report.axes_b));
    j["kappa"] = report.kappa;
    j["bandwidth"] = report.bandwidth;
    j["fit_rms"] = report.fit_rms;
    return j;
}

json to_json(const NormalizationResult& result) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["map"] = mat_to_json(result.map);
    j["image_point"] = vec_to_json(result.image_point);
    j["alpha"] = result.alpha;
    j["lambda"] = result.lambda;
    j["ball_radius"] = result.ball_radius;
    return j;
}

std::string theorem_csv(const TheoremDiagnostics& diag) {
    std::ostringstream out;
    out << "delta,vp_cap,vp_cap_stderr,vp_cone,vp_cone_stderr,decrease,"
           "decrease_stderr,winner,ineq1_lhs,ineq1_rhs,ineq2_lhs,ineq2_rhs\n";
    for (const TheoremRow& row : diag.rows) {
        out << format_float(row.delta) << ',' << format_float(row.vp_cap) << ','
            << format_float(row.vp_cap_stderr) << ',' << format_float(row.vp_cone)
            << ',' << format_float(row.vp_cone_stderr) << ','
            << format_float(row.decrease) << ','
            << format_float(row.decrease_stderr) << ',' << winner_name(row.winner)
            << ',' << format_float(row.ineq1_lhs) << ','
            << format_float(row.ineq1_rhs) << ',' << format_float(row.ineq2_lhs)
            << ',' << format_float(row.ineq2_rhs) << '\n';
    }
    return out.str();
}

json theorem_summary_json(const TheoremDiagnostics& diag) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["dim"] = diag.n;
    j["vp_base"] = diag.vp_base;
    j["vp_base_stderr"] = diag.vp_base_stderr;
    j["exact_path"] = diag.exact_path;
    j["all_decrease"] = diag.all_decrease;
    j["fitted_exponent"] = diag.fitted_exponent;
    j["expected_exponent"] = 0.5 * (diag.n + 1);
    j["fitted_constant"] = diag.fitted_constant;
    const bool exponent_ok =
        !(diag.rows.size() >= 2) ||
        std::abs(diag.fitted_exponent - 0.5 * (diag.n + 1)) <= 0.15;
    j["pass"] = diag.all_decrease && exponent_ok;
    json winners = json::array();
    for (const TheoremRow& row : diag.rows) winners.push_back(winner_name(row.winner));
    j["winners"] = winners;
    return j;
}

std::string modulus_csv(const EmpiricalModulus& grid) {
    std::ostringstream out;
    out << "t,measured,leading,ratio\n";
    for (const ModulusRow& row : grid.rows) {
        out << format_float(row.t) << ',' << format_float(row.measured) << ','
            << format_float(row.leading) << ',' << format_float(row.ratio) << '\n';
    }
    return out.str();
}

std::string modulus_svg(const std::vector<std::string>& names,
                        const std::vector<EmpiricalModulus>& grids) {
    const double w = 480.0, h = 320.0, pad = 48.0;
    double x_min = 1e300, x_max = -1e300, y_min = 1e300, y_max = -1e300;
    for (const auto& g : grids) {
        for (const auto& row : g.rows) {
            const double x = std::log10(row.t);
            x_min = std::min(x_min, x);
            x_max = std::max(x_max, x);
            y_min = std::min(y_min, row.ratio);
            y_max = std::max(y_max, row.ratio);
        }
    }
    y_min = std::min(y_min, 1.0) - 0.02;
    y_max = std::max(y_max, 1.0) + 0.02;
    if (!(x_max > x_min)) x_max = x_min + 1.0;
    const auto px = [&](double x) {
        return pad + (x - x_min) / (x_max - x_min) * (w - 2.0 * pad);
    };
    const auto py = [&](double y) {
        return h - pad - (y - y_min) / (y_max - y_min) * (h - 2.0 * pad);
    };
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w
        << "\" height=\"" << h << "\">\n";
    out << "<line x1=\"" << px(x_min) << "\" y1=\"" << py(1.0) << "\" x2=\""
        << px(x_max) << "\" y2=\"" << py(1.0)
        << "\" stroke=\"#999\" stroke-dasharray=\"4 3\"/>\n";
    for (std::size_t g = 0; g < grids.size(); ++g) {
        out << "<polyline fill=\"none\" stroke=\"" << colors[g % 4]
            << "\" stroke-width=\"1.5\" points=\"";
        for (const auto& row : grids[g].rows)
            out << px(std::log10(row.t)) << ',' << py(row.ratio) << ' ';
        out << "\"/>\n";
        out << "<text x=\"" << (pad + 6) << "\" y=\"" << (pad + 16.0 * (g + 1))
            << "\" fill=\"" << colors[g % 4] << "\" font-size=\"12\">"
            << (g < names.size() ? names[g] : "grid") << "</text>\n";
    }
    out << "<text x=\"" << (w / 2 - 30) << "\" y=\"" << (h - 12)
        << "\" font-size=\"12\">log10 t</text>\n";
    out << "<text x=\"8\" y=\"" << (h / 2) << "\" font-size=\"12\">ratio</text>\n";
    out << "</svg>\n";
    return out.str();
}

} // namespace vplab
