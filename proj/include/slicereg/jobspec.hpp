#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "slicereg/slicereg.hpp"

namespace slicereg::cli {

using nlohmann::json;

/// Exit codes of the batch front end.
enum ExitCode : int {
    kOk = 0,
    kValidation = 2,
    kNonConvergence = 3,
    kPole = 4,
};

struct JobOptions {
    std::uint64_t seed = 0;
    double tol = 1e-11;
    int refine = -1; // ladder length where applicable
};

namespace detail {

inline double as_number(const json& j, const char* what) {
    if (!j.is_number()) throw ParamError(std::string(what) + ": expected a number");
    return j.get<double>();
}

inline Quaternion as_quaternion(const json& j, const char* what) {
    if (j.is_number()) return Quaternion(j.get<double>());
    if (!j.is_array() || j.size() != 4)
        throw ParamError(std::string(what) + ": expected 4-element array");
    return {as_number(j[0], what), as_number(j[1], what), as_number(j[2], what),
            as_number(j[3], what)};
}

inline std::vector<Quaternion> as_quaternion_list(const json& j, const char* what) {
    if (!j.is_array() || j.empty())
        throw ParamError(std::string(what) + ": expected a nonempty array");
    std::vector<Quaternion> out;
    out.reserve(j.size());
    for (const auto& e : j) out.push_back(as_quaternion(e, what));
    return out;
}

inline UnitImaginary as_unit(const json& j, const char* what) {
    return UnitImaginary(as_quaternion(j, what));
}

inline Chirality as_form(const json& spec) {
    const std::string form = spec.value("form", "left");
    if (form == "left") return Chirality::left;
    if (form == "right") return Chirality::right;
    throw ParamError("form: expected \"left\" or \"right\"");
}

inline void append_number(std::string& out, double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    out += buf;
}

inline void append_quaternion(std::string& out, const Quaternion& q) {
    append_number(out, q.x0);
    out += ',';
    append_number(out, q.x1);
    out += ',';
    append_number(out, q.x2);
    out += ',';
    append_number(out, q.x3);
}

} // namespace detail

/// Function specs:
///   {"kind":"polynomial","coeffs":[[4 reals],...],"form":"left"|"right"}
///   {"kind":"star_rational","num":[[4],...],"den":[[4],...],"form":...}
///   {"kind":"sampled", ...} is boundary data; see parse_boundary_data.
inline SliceFunction parse_function(const json& spec) {
    if (!spec.is_object() || !spec.contains("kind"))
        throw ParamError("function spec: missing kind");
    const std::string kind = spec["kind"];
    if (kind == "polynomial") {
        if (!spec.contains("coeffs")) throw ParamError("polynomial: missing coeffs");
        return SliceFunction::polynomial(
            detail::as_quaternion_list(spec["coeffs"], "polynomial coeffs"),
            detail::as_form(spec));
    }
    if (kind == "star_rational") {
        if (!spec.contains("num") || !spec.contains("den"))
            throw ParamError("star_rational: missing num/den");
        return star_rational(detail::as_quaternion_list(spec["num"], "star_rational num"),
                             detail::as_quaternion_list(spec["den"], "star_rational den"),
                             detail::as_form(spec));
    }
    throw ParamError("function spec: unknown kind '" + kind + "'");
}

/// Boundary data: any function spec, or tabulated samples
///   {"kind":"sampled","params":[t...],"values":[[4]...],"periodic":bool}.
inline BoundaryData parse_boundary_data(const json& spec) {
    if (spec.is_object() && spec.value("kind", "") == "sampled") {
        if (!spec.contains("params") || !spec.contains("values"))
            throw ParamError("sampled: missing params/values");
        std::vector<double> params;
        for (const auto& t : spec["params"])
            params.push_back(detail::as_number(t, "sampled params"));
        return BoundaryData::sampled(params,
                                     detail::as_quaternion_list(spec["values"], "sampled values"),
                                     spec.value("periodic", true));
    }
    return BoundaryData(parse_function(spec));
}

/// Contour specs:
///   {"kind":"circle","center":[u,v],"radius":r,"j":[4],"order":n}
///   {"kind":"polyline_arcs","points":[[u,v],...],"closed":bool,"j":[4]}
inline Contour parse_contour(const json& spec) {
    if (!spec.is_object() || !spec.contains("kind"))
        throw ParamError("contour spec: missing kind");
    const UnitImaginary j = spec.contains("j") ? detail::as_unit(spec["j"], "contour j")
                                               : UnitImaginary::e1();
    const std::string kind = spec["kind"];
    if (kind == "circle") {
        const auto& c = spec.at("center");
        if (!c.is_array() || c.size() != 2) throw ParamError("circle center: expected [u, v]");
        return Contour::circle(
            SlicePoint(detail::as_number(c[0], "center"), detail::as_number(c[1], "center"), j),
            detail::as_number(spec.at("radius"), "radius"), j, spec.value("order", 16));
    }
    if (kind == "polyline_arcs") {
        std::vector<Vec2> pts;
        for (const auto& p : spec.at("points")) {
            if (!p.is_array() || p.size() != 2) throw ParamError("polyline point: expected [u,v]");
            pts.push_back({detail::as_number(p[0], "point"), detail::as_number(p[1], "point")});
        }
        return Contour::polyline(pts, spec.value("closed", true), j, spec.value("order", 16));
    }
    throw ParamError("contour spec: unknown kind '" + kind + "'");
}

inline AxiallySymmetricDomain parse_domain(const json& spec) {
    if (!spec.is_object() || spec.value("kind", "") != "ball")
        throw ParamError("domain spec: expected {\"kind\":\"ball\",...}");
    return AxiallySymmetricDomain::ball(spec.value("center", 0.0),
                                        detail::as_number(spec.at("radius"), "domain radius"));
}

inline SliceTestFunction parse_bump(const json& spec, Chirality form) {
    return SliceTestFunction::bump(detail::as_number(spec.at("uc"), "bump uc"),
                                   detail::as_number(spec.at("vc"), "bump vc"),
                                   detail::as_number(spec.at("wu"), "bump wu"),
                                   detail::as_number(spec.at("wv"), "bump wv"), form);
}

namespace detail {

inline std::vector<Quaternion> parse_probes(const json& spec, Rng& rng) {
    if (spec.is_array()) return as_quaternion_list(spec, "probes");
    if (spec.is_object()) {
        const Quaternion center =
            spec.contains("center") ? as_quaternion(spec["center"], "probes center") : Quaternion{};
        const double radius = spec.value("radius", 1.0);
        std::vector<Quaternion> out;
        if (spec.contains("random_interior")) {
            const int n = spec["random_interior"].get<int>();
            for (int k = 0; k < n; ++k) out.push_back(rng.in_ball(center, radius));
            return out;
        }
        if (spec.contains("random_exterior")) {
            const int n = spec["random_exterior"].get<int>();
            const double outer = spec.value("outer_radius", 4.0 * radius);
            while (static_cast<int>(out.size()) < n) {
                const Quaternion p = rng.in_ball(center, outer);
                if ((p - center).norm() > radius) out.push_back(p);
            }
            return out;
        }
    }
    throw ParamError("probes: expected an array of points or a random sampling spec");
}

inline TransformOptions transform_options(const JobOptions& opts) {
    TransformOptions t;
    t.quad = QuadratureOptions{opts.tol, opts.tol, 20, -1};
    return t;
}

struct JobResult {
    std::string payload;
    bool is_json = false;
};

inline JobResult run_eval_kernel(const json& spec, const JobOptions& opts) {
    (void)opts;
    const Quaternion s = as_quaternion(spec.at("s"), "s");
    const auto points = as_quaternion_list(spec.at("points"), "points");
    const std::string which = spec.value("kernel", "left");
    std::string out = "p0,p1,p2,p3,v0,v1,v2,v3,pole_distance\n";
    for (const auto& p : points) {
        Quaternion value;
        if (which == "left") value = cauchy_kernel_left(s, p).value;
        else if (which == "right") value = cauchy_kernel_right(s, p).value;
        else if (which == "phi") value = phi(s, p);
        else if (which == "star_inverse") value = star_inverse(s, p);
        else throw ParamError("eval-kernel: unknown kernel '" + which + "'");
        append_quaternion(out, p);
        out += ',';
        append_quaternion(out, value);
        out += ',';
        append_number(out, dist_sphere_point(sphere_of(p), s));
        out += '\n';
    }
    return {out};
}

inline JobResult run_transform(const json& spec, const JobOptions& opts, Rng& rng) {
    const BoundaryData f = parse_boundary_data(spec.at("function"));
    const Contour contour = parse_contour(spec.at("contour"));
    const auto probes = parse_probes(spec.at("probes"), rng);
    const std::string side = spec.value("side", "left");
    const bool derivative = spec.value("derivative", false);
    const auto topts = transform_options(opts);
    std::string out = "p0,p1,p2,p3,v0,v1,v2,v3,dist_to_boundary\n";
    for (const auto& p : probes) {
        Quaternion value;
        if (derivative) value = transform_derivative(f, contour, p, topts);
        else if (side == "left") value = cauchy_transform(f, contour, p, topts);
        else if (side == "right") value = cauchy_transform_right(f, contour, p, topts);
        else throw ParamError("transform: unknown side '" + side + "'");
        append_quaternion(out, p);
        out += ',';
        append_quaternion(out, value);
        out += ',';
        append_number(out, dist_sphere_curve(sphere_of(p), contour));
        out += '\n';
    }
    return {out};
}

inline JobResult run_split(const json& spec, const JobOptions& opts, Rng& rng) {
    const BoundaryData f = parse_boundary_data(spec.at("function"));
    const Contour contour = parse_contour(spec.at("contour"));
    const SplitPair parts = split(f, contour, transform_options(opts));
    std::string out = "part,p0,p1,p2,p3,v0,v1,v2,v3,dist_to_boundary\n";
    auto emit = [&](const char* part, const Quaternion& p, const Quaternion& v) {
        out += part;
        out += ',';
        append_quaternion(out, p);
        out += ',';
        append_quaternion(out, v);
        out += ',';
        append_number(out, dist_sphere_curve(sphere_of(p), contour));
        out += '\n';
    };
    for (const auto& p : parse_probes(spec.at("probes_inside"), rng))
        emit("plus", p, parts.f_plus(p));
    for (const auto& p : parse_probes(spec.at("probes_outside"), rng))
        emit("minus", p, parts.f_minus(p));
    return {out};
}

inline JobResult run_jump_check(const json& spec, const JobOptions& opts) {
    const BoundaryData f = parse_boundary_data(spec.at("function"));
    const Contour contour = parse_contour(spec.at("contour"));
    std::vector<double> distances;
    for (const auto& d : spec.at("distances"))
        distances.push_back(as_number(d, "distances"));
    const auto errs =
        boundary_jump_check(f, contour, as_number(spec.at("t0"), "t0"), distances,
                            transform_options(opts));
    std::string out = "distance,jump_norm\n";
    for (size_t i = 0; i < errs.size(); ++i) {
        append_number(out, distances[i]);
        out += ',';
        append_number(out, errs[i]);
        out += '\n';
    }
    return {out};
}

inline JobResult run_holder(const json& spec, const JobOptions& opts) {
    (void)opts;
    const BoundaryData f = parse_boundary_data(spec.at("function"));
    const Contour contour = parse_contour(spec.at("contour"));
    const HolderData h = holder_seminorm(f, contour, as_number(spec.at("alpha"), "alpha"),
                                         spec.value("samples", 256));
    std::string out = "alpha,seminorm,sup_norm,norm\n";
    append_number(out, h.alpha);
    out += ',';
    append_number(out, h.seminorm);
    out += ',';
    append_number(out, h.sup_norm);
    out += ',';
    append_number(out, h.norm());
    out += '\n';
    return {out};
}

inline JobResult run_series_fit(const json& spec, const JobOptions& opts) {
    auto f = parse_function(spec.at("function"));
    const auto& window = spec.at("window");
    if (!window.is_array() || window.size() != 2)
        throw ParamError("series-fit: window must be [n_min, n_max]");
    const int n_min = window[0].get<int>(), n_max = window[1].get<int>();
    const json& center = spec.at("center");

    json result;
    if (center.is_number()) {
        const UnitImaginary j =
            spec.contains("j") ? as_unit(spec["j"], "series j") : UnitImaginary::e1();
        const auto series = laurent_coefficients(
            [&](const Quaternion& q) { return f(q); }, center.get<double>(), j,
            as_number(spec.at("rho"), "rho"), n_min, n_max,
            QuadratureOptions{opts.tol, opts.tol, 20, -1});
        result["center"] = center.get<double>();
        json coeffs = json::array();
        for (int m = n_min; m <= n_max; ++m) {
            const Quaternion c = series.coeff(m);
            coeffs.push_back({{"n", m}, {"c", {c.x0, c.x1, c.x2, c.x3}}});
        }
        result["coefficients"] = coeffs;
        const auto [r1, r2] = series.convergence_radii();
        result["radii"] = {r1, r2};
    } else {
        const Quaternion q0 = as_quaternion(center, "center");
        const auto series =
            spherical_coefficients([&](const Quaternion& q) { return f(q); }, q0, n_min, n_max,
                                   spec.value("sample_radius", 0.0));
        result["center"] = {q0.x0, q0.x1, q0.x2, q0.x3};
        json coeffs = json::array();
        for (int m = series.n_min(); m <= series.n_max(); ++m) {
            const Quaternion c = series.coeff(m);
            coeffs.push_back({{"n", m}, {"c", {c.x0, c.x1, c.x2, c.x3}}});
        }
        result["coefficients"] = coeffs;
    }
    return {result.dump(2) + "\n", true};
}

inline JobResult run_verify_fundamental(const json& spec, const JobOptions& opts) {
    const Quaternion s = as_quaternion(spec.at("s"), "s");
    const SliceTestFunction phi = parse_bump(spec.at("bump"), Chirality::right);
    const UnitImaginary j =
        spec.contains("j") ? as_unit(spec["j"], "j") : UnitImaginary::e1();
    const int levels = opts.refine > 0 ? opts.refine : spec.value("levels", 3);
    const Quaternion target = fundamental_pairing_target(phi, s);
    std::string out = "level,v0,v1,v2,v3,t0,t1,t2,t3,rel_err\n";
    for (int level = 0; level < levels; ++level) {
        const Quaternion v = fundamental_pairing(phi, s, j, level);
        char head[16];
        std::snprintf(head, sizeof head, "%d,", level);
        out += head;
        append_quaternion(out, v);
        out += ',';
        append_quaternion(out, target);
        out += ',';
        append_number(out, (v - target).norm() / std::max(target.norm(), 1e-300));
        out += '\n';
    }
    return {out};
}

inline JobResult run_solve_global(const json& spec, const JobOptions& opts) {
    auto rhs = parse_function(spec.at("rhs"));
    const auto domain = parse_domain(spec.at("domain"));
    SolveOptions sopts;
    sopts.level = opts.refine > 0 ? opts.refine : spec.value("level", 1);
    sopts.probe_grid = spec.value("probe_grid", 7);
    if (spec.contains("slices")) {
        sopts.probe_slices.clear();
        for (const auto& jj : spec["slices"])
            sopts.probe_slices.push_back(as_unit(jj, "slices"));
    }
    const auto result =
        solve_global([&](const Quaternion& q) { return rhs(q); }, domain, sopts);
    std::string out = "u,v,j_index,residual_norm\n";
    for (const auto& r : result.residuals) {
        append_number(out, r.u);
        out += ',';
        append_number(out, r.v);
        out += ',';
        char buf[16];
        std::snprintf(buf, sizeof buf, "%d,", r.j_index);
        out += buf;
        append_number(out, r.norm);
        out += '\n';
    }
    return {out};
}

inline JobResult run_report(const json& spec, const JobOptions& opts) {
    const int levels = opts.refine > 0 ? opts.refine : spec.value("levels", 0);
    if (levels < 3) throw ParamError("report: a refinement ladder needs at least 3 levels");
    const std::string ladder = spec.value("ladder", "quadrature");

    std::vector<Quaternion> values;
    if (ladder == "quadrature") {
        const Contour contour = parse_contour(spec.at("contour"));
        const Quaternion pole = as_quaternion(spec.at("pole"), "pole");
        for (int level = 0; level < levels; ++level) {
            QuadratureOptions q;
            q.uniform_levels = level;
            values.push_back(integrate_ds_j(
                [&](const Quaternion& s) { return inverse(s - pole); }, contour, q));
        }
    } else if (ladder == "fundamental") {
        const Quaternion s = as_quaternion(spec.at("s"), "s");
        const SliceTestFunction phi = parse_bump(spec.at("bump"), Chirality::right);
        for (int level = 0; level < levels; ++level)
            values.push_back(fundamental_pairing(phi, s, UnitImaginary::e1(), level));
    } else {
        throw ParamError("report: unknown ladder '" + ladder + "'");
    }

    const Quaternion finest = values.back();
    std::string out = "level,v0,v1,v2,v3,err_vs_finest,order_estimate\n";
    double prev_err = 0;
    for (int level = 0; level < levels; ++level) {
        const double err = (values[level] - finest).norm();
        char head[16];
        std::snprintf(head, sizeof head, "%d,", level);
        out += head;
        append_quaternion(out, values[level]);
        out += ',';
        append_number(out, err);
        out += ',';
        if (level > 0 && err > 0 && prev_err > 0)
            append_number(out, std::log2(prev_err / err));
        else
            out += "nan";
        out += '\n';
        prev_err = err;
    }
    return {out};
}

inline bool contains_nan(const std::string& payload) {
    // the order estimate column legitimately prints "nan" for the first row
    std::istringstream lines(payload);
    std::string line;
    std::getline(lines, line); // header
    while (std::getline(lines, line)) {
        std::istringstream fields(line);
        std::string field;
        std::vector<std::string> all;
        while (std::getline(fields, field, ',')) all.push_back(field);
        for (size_t i = 0; i + 1 < all.size(); ++i)
            if (all[i].find("nan") != std::string::npos ||
                all[i].find("inf") != std::string::npos)
                return true;
    }
    return false;
}

} // namespace detail

/// Executes one job and writes its artifact; returns the process exit code.
/// Diagnostics go to stderr.
inline int run_job(const std::string& command, const json& spec, const std::string& out_path,
                   const JobOptions& opts_in) {
    try {
        JobOptions opts = opts_in;
        if (spec.contains("seed") && opts.seed == 0) opts.seed = spec["seed"].get<std::uint64_t>();
        Rng rng(opts.seed);

        detail::JobResult result;
        if (command == "eval-kernel") result = detail::run_eval_kernel(spec, opts);
        else if (command == "transform") result = detail::run_transform(spec, opts, rng);
        else if (command == "split") result = detail::run_split(spec, opts, rng);
        else if (command == "jump-check") result = detail::run_jump_check(spec, opts);
        else if (command == "holder") result = detail::run_holder(spec, opts);
        else if (command == "series-fit") result = detail::run_series_fit(spec, opts);
        else if (command == "verify-fundamental")
            result = detail::run_verify_fundamental(spec, opts);
        else if (command == "solve-global") result = detail::run_solve_global(spec, opts);
        else if (command == "report") result = detail::run_report(spec, opts);
        else {
            std::cerr << "unknown command: " << command << "\n";
            return kValidation;
        }

        if (!result.is_json && detail::contains_nan(result.payload)) {
            std::cerr << "non-finite values in the output; refusing to emit them\n";
            return kNonConvergence;
        }

        if (out_path.empty() || out_path == "-") {
            std::cout << result.payload;
        } else {
            std::ofstream file(out_path, std::ios::binary);
            if (!file) {
                std::cerr << "cannot open output file: " << out_path << "\n";
                return kValidation;
            }
            file << result.payload;
        }
        return kOk;
    } catch (const PoleError& e) {
        std::cerr << "pole error: " << e.what() << "\n";
        return kPole;
    } catch (const ZeroDivisionError& e) {
        std::cerr << "zero division: " << e.what() << "\n";
        return kPole;
    } catch (const NonConvergenceError& e) {
        std::cerr << "non-convergence: " << e.what() << "\n";
        return kNonConvergence;
    } catch (const UndecidableError& e) {
        std::cerr << "undecidable: " << e.what() << "\n";
        return kNonConvergence;
    } catch (const ParamError& e) {
        std::cerr << "invalid job: " << e.what() << "\n";
        return kValidation;
    } catch (const DomainError& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return kValidation;
    } catch (const json::exception& e) {
        std::cerr << "invalid spec: " << e.what() << "\n";
        return kValidation;
    }
}

} // namespace slicereg::cli
