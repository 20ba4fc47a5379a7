#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "vplab/body.hpp"
#include "vplab/curvature.hpp"
#include "vplab/errors.hpp"
#include "vplab/io.hpp"
#include "vplab/perturb.hpp"
#include "vplab/polytope.hpp"
#include "vplab/rat.hpp"
#include "vplab/santalo.hpp"
#include "vplab/smooth.hpp"
#include "vplab/volume.hpp"

using nlohmann::json;
using namespace vplab;

namespace {

struct RunConfig {
    std::uint64_t seed = 20240601;
    std::uint64_t samples = 200000;
    int dim = 3;
    std::vector<double> deltas{1e-2, 1e-3, 1e-4};
    double eps = 1e-3;
    std::string out;
    std::string format = "json";
    int jobs = 0;
};

struct UsageError : std::runtime_error {
    explicit UsageError(const std::string& msg) : std::runtime_error(msg) {}
};

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> vals;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        std::size_t used = 0;
        double v = std::stod(item, &used);
        if (used != item.size()) throw UsageError("bad number in list: " + item);
        vals.push_back(v);
    }
    if (vals.empty()) throw UsageError("empty number list");
    return vals;
}

Vec parse_point(const std::string& text) {
    std::vector<double> vals = parse_double_list(text);
    Vec v(static_cast<int>(vals.size()));
    for (int i = 0; i < v.size(); ++i) v(i) = vals[i];
    return v;
}

void validate(const RunConfig& cfg) {
    if (cfg.samples < 1000) throw UsageError("--samples must be at least 1000");
    if (cfg.dim < 2 || cfg.dim > 6) throw UsageError("--dim must lie in [2, 6]");
    if (cfg.format != "csv" && cfg.format != "json")
        throw UsageError("--format must be csv or json");
    for (std::size_t i = 0; i < cfg.deltas.size(); ++i) {
        if (!(cfg.deltas[i] > 0.0))
            throw UsageError("--deltas entries must be positive");
        if (i > 0 && !(cfg.deltas[i] < cfg.deltas[i - 1]))
            throw UsageError("--deltas must be strictly decreasing");
    }
}

// Writes to <out>/<name> when an output directory is set, stdout otherwise.
void emit(const RunConfig& cfg, const std::string& name,
          const std::string& content) {
    if (cfg.out.empty()) {
        std::cout << content;
        return;
    }
    std::filesystem::create_directories(cfg.out);
    const std::string path = cfg.out + "/" + name;
    std::ofstream f(path, std::ios::binary);
    if (!f) throw UsageError("cannot write " + path);
    f << content;
}

json run_header(const RunConfig& cfg) {
    json j;
    j["seed"] = cfg.seed;
    j["samples"] = cfg.samples;
    return j;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

void cmd_vp(const std::string& body_file, const RunConfig& cfg) {
    ConvexBody body = load_body(body_file);
    VolumeProductReport rep = santalo_point(body, cfg.samples, cfg.seed, cfg.jobs);
    if (cfg.format == "csv") {
        std::ostringstream out;
        out << "vp_at_origin,vp_at_santalo,vp_stderr,normalized_vp,iterations";
        for (int i = 0; i < rep.santalo_point.size(); ++i) out << ",santalo_" << i;
        out << '\n'
            << format_float(rep.vp_at_origin) << ','
            << format_float(rep.vp_at_santalo) << ','
            << format_float(rep.vp_std_error) << ','
            << format_float(rep.normalized_vp) << ',' << rep.iterations;
        for (int i = 0; i < rep.santalo_point.size(); ++i)
            out << ',' << format_float(rep.santalo_point(i));
        out << '\n';
        emit(cfg, "vp.csv", out.str());
        return;
    }
    json j = to_json(rep);
    j["config"] = run_header(cfg);
    emit(cfg, "vp.json", dump(j));
}

void cmd_baseline(const RunConfig& cfg) {
    struct Row {
        std::string name;
        ConvexBody body;
    };
    const int n = cfg.dim;
    std::vector<Row> rows;
    rows.push_back({"cube", ConvexBody::polytope(make_cube(n).data())});
    rows.push_back(
        {"cross_polytope", ConvexBody::polytope(make_cross_polytope(n).data())});
    rows.push_back({"ball", ConvexBody::smooth(EllipsoidOracle::ball(n, 1.0))});
    rows.push_back({"simplex", ConvexBody::polytope(make_simplex(n).data())});
    if (n == 3) {
        // Hanner-type body: the l1 sum of a square and a segment
        std::vector<RatVec> pts;
        for (int sx : {-1, 1})
            for (int sy : {-1, 1}) pts.push_back({Rat(sx), Rat(sy), Rat(0)});
        pts.push_back({Rat(0), Rat(0), Rat(1)});
        pts.push_back({Rat(0), Rat(0), Rat(-1)});
        rows.push_back({"hanner", ConvexBody::polytope(build_polytope(pts))});
    }

    std::ostringstream csv;
    csv << "name,dim,vp,vp_stderr,normalized_vp,method\n";
    json items = json::array();
    for (const Row& row : rows) {
        VolumeProductReport rep =
            santalo_point(row.body, cfg.samples, cfg.seed, cfg.jobs);
        const char* method = rep.vp_std_error == 0.0 ? "exact" : "mc";
        csv << row.name << ',' << n << ',' << format_float(rep.vp_at_santalo)
            << ',' << format_float(rep.vp_std_error) << ','
            << format_float(rep.normalized_vp) << ',' << method << '\n';
        json item = to_json(rep);
        item["name"] = row.name;
        item["dim"] = n;
        item["method"] = method;
        items.push_back(item);
    }
    if (cfg.format == "csv") {
        emit(cfg, "baseline.csv", csv.str());
    } else {
        json j;
        j["schema_version"] = kSchemaVersion;
        j["config"] = run_header(cfg);
        j["rows"] = items;
        emit(cfg, "baseline.json", dump(j));
    }
}

void cmd_theorem(const std::string& body_file, const std::string& point,
                 const RunConfig& cfg) {
    ConvexBody body = load_body(body_file);
    Vec x = parse_point(point);
    if (x.size() != body.dim()) throw UsageError("--point dimension mismatch");

    VolumeProductReport santalo = santalo_point(body, cfg.samples, cfg.seed, cfg.jobs);
    ConvexBody centered = body.translated(-santalo.santalo_point);
    Vec x0 = x - santalo.santalo_point;
    NormalizationResult nr =
        normalize_at_point(centered, x0, cfg.samples, cfg.seed, 0.0, cfg.jobs);
    ConvexBody img = centered.linear_image(nr.map);
    TheoremDiagnostics diag =
        verify_theorem(img, nr.image_point, cfg.deltas, cfg.eps, cfg.samples,
                       cfg.seed, cfg.jobs);

    json summary = theorem_summary_json(diag);
    summary["config"] = run_header(cfg);
    summary["santalo_point"] = to_json(santalo)["santalo_point"];
    if (cfg.out.empty()) {
        std::cout << dump(summary);
    } else {
        emit(cfg, "theorem.csv", theorem_csv(diag));
        emit(cfg, "theorem_summary.json", dump(summary));
        std::cout << dump(summary);
    }
}

void cmd_moduli(const std::string& body_file, const std::string& point,
                bool svg, const RunConfig& cfg) {
    ConvexBody body = load_body(body_file);
    Vec x = parse_point(point);
    if (x.size() != body.dim()) throw UsageError("--point dimension mismatch");

    IndicatrixReport fit = fit_indicatrix(body, x);
    double log_r = 0.0;
    for (int i = 0; i < fit.eigenvalues.size(); ++i)
        log_r -= std::log(fit.eigenvalues(i));
    const double r = std::exp(log_r / fit.eigenvalues.size());

    EmpiricalModulus phi = sandwich_moduli(body, x, cfg.deltas);
    EmpiricalModulus cap = cap_ratio_grid(body.dim(), r, cfg.deltas);
    EmpiricalModulus cone = cone_ratio_grid(body.dim(), r, cfg.deltas);
    if (cfg.out.empty()) {
        std::cout << "# phi\n" << modulus_csv(phi) << "# cap\n" << modulus_csv(cap)
                  << "# cone\n" << modulus_csv(cone);
    } else {
        emit(cfg, "moduli_phi.csv", modulus_csv(phi));
        emit(cfg, "moduli_cap.csv", modulus_csv(cap));
        emit(cfg, "moduli_cone.csv", modulus_csv(cone));
        if (svg)
            emit(cfg, "moduli.svg",
                 modulus_svg({"phi", "cap", "cone"}, {phi, cap, cone}));
    }
}

void cmd_dual_identity(const std::string& body_file, const std::string& point,
                       const RunConfig& cfg) {
    ConvexBody body = load_body(body_file);
    Vec x = parse_point(point);
    if (x.size() != body.dim()) throw UsageError("--point dimension mismatch");

    VolumeProductReport santalo = santalo_point(body, cfg.samples, cfg.seed, cfg.jobs);
    ConvexBody centered = body.translated(-santalo.santalo_point);
    NormalizationResult nr = normalize_at_point(
        centered, x - santalo.santalo_point, cfg.samples, cfg.seed, 0.0, cfg.jobs);
    ConvexBody img = centered.linear_image(nr.map);

    std::ostringstream out;
    out << "delta,discrepancy\n";
    for (double d : cfg.deltas) {
        out << format_float(d) << ','
            << format_float(dual_of_cap_identity(img, nr.image_point, d)) << '\n';
    }
    emit(cfg, "dual_identity.csv", out.str());
}

void print_error(const char* type, const std::string& message) {
    json j;
    j["error"] = {{"type", type}, {"message", message}};
    std::cerr << j.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"convex volume-product laboratory"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string body_file, point, deltas_text;
    bool svg = false;

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--seed", cfg.seed, "random seed");
        sub->add_option("--samples", cfg.samples, "Monte Carlo sample count");
        sub->add_option("--deltas", deltas_text, "comma list, strictly decreasing");
        sub->add_option("--eps", cfg.eps, "diagnostic margin");
        sub->add_option("--out", cfg.out, "output directory (default: stdout)");
        sub->add_option("--format", cfg.format, "csv or json");
        sub->add_option("--jobs", cfg.jobs, "worker threads (0 = logical cores)");
    };

    CLI::App* vp = app.add_subcommand("vp", "volume product and Santalo point");
    vp->add_option("body", body_file, "body JSON file")->required();
    add_common(vp);

    CLI::App* baseline = app.add_subcommand("baseline", "reference vp table");
    baseline->add_option("--dim", cfg.dim, "dimension (2..6)");
    add_common(baseline);
    baseline->get_option("--format")->default_str("csv");

    CLI::App* theorem =
        app.add_subcommand("theorem", "volume-product decrease diagnostics");
    theorem->add_option("body", body_file, "body JSON file")->required();
    theorem->add_option("--point", point, "boundary point, comma list")->required();
    add_common(theorem);

    CLI::App* moduli = app.add_subcommand("moduli", "empirical modulus grids");
    moduli->add_option("body", body_file, "body JSON file")->required();
    moduli->add_option("--point", point, "boundary point, comma list")->required();
    moduli->add_flag("--svg", svg, "also write an SVG plot");
    add_common(moduli);

    CLI::App* dual =
        app.add_subcommand("dual-identity", "polar-of-cap identity check");
    dual->add_option("body", body_file, "body JSON file")->required();
    dual->add_option("--point", point, "boundary point, comma list")->required();
    add_common(dual);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (baseline->parsed() && cfg.format == "json" &&
            !baseline->get_option("--format")->count())
            cfg.format = "csv";
        if (!deltas_text.empty()) cfg.deltas = parse_double_list(deltas_text);
        validate(cfg);
        if (vp->parsed()) cmd_vp(body_file, cfg);
        if (baseline->parsed()) cmd_baseline(cfg);
        if (theorem->parsed()) cmd_theorem(body_file, point, cfg);
        if (moduli->parsed()) cmd_moduli(body_file, point, svg, cfg);
        if (dual->parsed()) cmd_dual_identity(body_file, point, cfg);
        return 0;
    } catch (const UsageError& e) {
        print_error("usage", e.what());
        return 2;
    } catch (const BodyParseError& e) {
        print_error("body_parse", e.what());
        return 2;
    } catch (const json::exception& e) {
        print_error("json", e.what());
        return 2;
    } catch (const FlatPointError& e) {
        print_error("flat_point", e.what());
        return 4;
    } catch (const InconclusiveError& e) {
        print_error("inconclusive", e.what());
        return 5;
    } catch (const GeometryError& e) {
        print_error("geometry", e.what());
        return 3;
    }
}
