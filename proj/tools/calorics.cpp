#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <regex>
#include <sstream>

#include "calorics/caloric.hpp"
#include "calorics/constructions.hpp"
#include "calorics/errors.hpp"
#include "calorics/nodal.hpp"
#include "calorics/poly_io.hpp"
#include "calorics/scan.hpp"

using namespace calorics;
using nlohmann::json;

namespace {

enum Exit { ok = 0, verification_failed = 2, assertion_failed = 3, config_error = 4 };

struct SpecArgs {
    std::string family;
    std::string fixture_id;
    unsigned d = 0;
    int n = 0;
    std::string eps;
    std::string rot;
    std::string kind = "re";
};

struct Source {
    std::string input;
    std::string fixture_id;
    std::string gen;
    int dim = 0;
    SpecArgs spec;
};

void add_spec_options(CLI::App* cmd, SpecArgs& a) {
    cmd->add_option("-d,--degree", a.d, "parabolic degree");
    cmd->add_option("-n,--dim", a.n, "space dimension (product, high-dim)");
    cmd->add_option("--eps", a.eps, "epsilon as p/q or a decimal float");
    cmd->add_option("--rot", a.rot, "rotation as c,s (exact rationals) or angle:<radians>");
    cmd->add_option("--kind", a.kind, "harmonic seed for high-dim: re or im");
}

bool is_rational_text(const std::string& s) {
    static const std::regex re(R"(^-?[0-9]+(/[0-9]+)?$)");
    return std::regex_match(s, re);
}

ConstructionSpec make_spec(const SpecArgs& a, bool need_eps = true) {
    ConstructionSpec spec;
    spec.family = parse_family(a.family);
    spec.fixture_id = a.fixture_id;
    spec.d = a.d;
    spec.kind = parse_seed_kind(a.kind);
    if (spec.family == Family::product)
        spec.n = a.n > 0 ? a.n : 2;
    else if (spec.family == Family::high_dim)
        spec.n = a.n > 0 ? a.n : 3;
    else if (spec.family == Family::basic)
        spec.n = 1;
    else if (spec.family != Family::fixture)
        spec.n = 2;
    if (spec.family != Family::fixture && spec.family != Family::product && spec.family != Family::basic &&
        spec.family != Family::high_dim && a.n > 0 && a.n != spec.n)
        throw InvalidArgument(to_string(spec.family) + " lives in n = 2");
    if (!a.rot.empty()) spec.rot = Rotation::parse(a.rot);
    if (!a.eps.empty()) {
        if (is_rational_text(a.eps)) {
            spec.eps = parse_rational(a.eps);
        } else {
            std::size_t used = 0;
            double v = 0;
            try {
                v = std::stod(a.eps, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != a.eps.size()) throw InvalidArgument("cannot parse eps '" + a.eps + "'");
            spec.eps = rational_from_double(v);
            spec.eps_from_float = true;
        }
    } else if (need_eps) {
        const bool uses_eps =
            spec.family == Family::lewy || spec.family == Family::odd || spec.family == Family::zero_mod_4;
        if (uses_eps) {
            if (auto e = default_epsilon(spec.family, spec.d)) {
                spec.eps = *e;
            } else {
                std::cerr << "no default eps for " << to_string(spec.family) << " d = " << spec.d
                          << "; scanning the default grid\n";
                const auto scan = scan_epsilon(spec, default_eps_grid(), target_count(spec).value());
                if (scan.flagged())
                    throw InvalidArgument("no admissible eps found on the default grid; pass --eps");
                spec.eps = *scan.largest_admissible;
            }
        }
    }
    return spec;
}

int infer_dim(const std::string& text) {
    static const std::regex indexed(R"(x([0-9]+))");
    int n = 0;
    for (auto it = std::sregex_iterator(text.begin(), text.end(), indexed); it != std::sregex_iterator(); ++it)
        n = std::max(n, std::stoi((*it)[1].str()));
    if (n > 0) return n;
    if (text.find('z') != std::string::npos) return 3;
    if (text.find('y') != std::string::npos) return 2;
    return 1;
}

Polynomial polynomial_from_document(const json& j) {
    if (j.contains("polynomial")) return polynomial_from_json(j.at("polynomial"));
    if (j.contains("family")) return build(construction_spec_from_json(j));
    return polynomial_from_json(j);
}

struct Loaded {
    Polynomial poly{1};
    json source;
};

Loaded load(const Source& src) {
    const int given = (!src.input.empty()) + (!src.fixture_id.empty()) + (!src.gen.empty());
    if (given != 1) throw InvalidArgument("give exactly one of: an expression or file, --fixture, --gen");
    if (!src.fixture_id.empty()) return {fixture(src.fixture_id), {{"fixture", src.fixture_id}}};
    if (!src.gen.empty()) {
        SpecArgs a = src.spec;
        a.family = src.gen;
        const ConstructionSpec spec = make_spec(a);
        return {build(spec), {{"spec", to_json(spec)}}};
    }
    std::string text = src.input;
    json source{{"expression", src.input}};
    if (std::ifstream file{src.input}; file) {
        std::stringstream buf;
        buf << file.rdbuf();
        text = buf.str();
        source = {{"file", src.input}};
        const auto first = text.find_first_not_of(" \t\r\n");
        if (first != std::string::npos && text[first] == '{') {
            json doc;
            try {
                doc = json::parse(text);
            } catch (const json::exception& ex) {
                throw InvalidArgument("malformed JSON in " + src.input + ": " + ex.what());
            }
            return {polynomial_from_document(doc), source};
        }
        while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) text.pop_back();
    }
    return {parse_poly(text, src.dim > 0 ? src.dim : infer_dim(text)), source};
}

void add_source_options(CLI::App* cmd, Source& s) {
    cmd->add_option("input", s.input, "polynomial expression, or a file with an expression or JSON");
    cmd->add_option("--fixture", s.fixture_id, "built-in example polynomial");
    cmd->add_option("--gen", s.gen, "construction family to generate");
    cmd->add_option("--space-dim", s.dim, "space dimension for expressions (inferred by default)");
    add_spec_options(cmd, s.spec);
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != item.size()) throw InvalidArgument("bad integer list '" + text + "'");
        out.push_back(v);
    }
    return out;
}

std::vector<Rational> parse_rational_list(const std::string& text) {
    std::vector<Rational> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_rational(item));
    return out;
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

// ---------------------------------------------------------------------------

int cmd_gen(const SpecArgs& args, const std::string& out_path, bool text_only) {
    const ConstructionSpec spec = make_spec(args);
    const Polynomial p = build(spec);
    const std::string text = to_string(p);
    if (!out_path.empty()) {
        std::ofstream out(out_path);
        if (!out) throw InvalidArgument("cannot write " + out_path);
        out << to_json(p).dump(2) << "\n";
    }
    if (text_only) {
        std::cout << text << "\n";
    } else {
        json report{{"spec", to_json(spec)}, {"rotation", spec.rot.exact ? "exact" : "angle"},
                    {"polynomial", to_json(p)}, {"text", text}};
        if (!spec.rot.exact) report["angle_error"] = spec.rot.angle_error;
        emit(report);
    }
    std::cerr << text << "\n";
    return ok;
}

int cmd_verify(const Source& src) {
    const Loaded in = load(src);
    const Polynomial& p = in.poly;
    json checks = json::object();
    bool all_ok = true;

    json degree{{"ok", true}};
    try {
        degree["degree"] = parabolic_degree(p);
    } catch (const Error& ex) {
        degree = {{"ok", false}, {"detail", ex.what()}};
        all_ok = false;
    }
    checks["parabolic_degree"] = degree;

    const CaloricCheck cal = is_caloric(p);
    checks["is_caloric"] = {{"ok", cal.ok()}, {"status", to_string(cal.status)}, {"detail", cal.detail}};
    all_ok = all_ok && cal.ok();

    if (!p.is_zero()) {
        const ChainReport chain = chain_check(p);
        json c{{"ok", chain.ok}, {"m", chain.m}};
        if (chain.first_failure) c["first_failure"] = *chain.first_failure;
        checks["chain_check"] = c;
        all_ok = all_ok && chain.ok;
    }
    if (cal.ok()) {
        const CheckResult eig = eigen_check(p);
        checks["eigen_check"] = {{"ok", eig.ok}, {"detail", eig.detail}};
        all_ok = all_ok && eig.ok;
    } else {
        checks["eigen_check"] = {{"ok", false}, {"detail", "skipped: not caloric"}};
    }
    emit({{"source", in.source}, {"polynomial", to_string(p)}, {"ok", all_ok}, {"checks", checks}});
    std::cerr << (all_ok ? "all checks pass" : "verification failed") << "\n";
    return all_ok ? ok : verification_failed;
}

int cmd_count(const Source& src, const std::string& schedule_text, bool slice, std::optional<int> expected) {
    const Loaded in = load(src);
    const Polynomial& p = in.poly;
    const unsigned d = parabolic_degree(p);
    ComponentReport r;
    if (schedule_text.empty()) {
        r = nodal_count(p);
    } else {
        const auto schedule = parse_int_list(schedule_text);
        r = nodal_count(p, schedule);
    }
    json report{{"source", in.source}, {"polynomial", to_string(p)}, {"degree", d}, {"count", to_json(r)}};
    int status = ok;

    if (is_caloric(p).ok() && p.depends_on_time() && d >= 2) {
        try {
            report["bounds"] = to_json(bounds_report(p.spatial_dim(), d, r.total));
        } catch (const BoundViolation& ex) {
            report["bounds"] = {{"violation", ex.what()}};
            status = verification_failed;
        }
    }
    if (slice) {
        const SliceReport s = slice_count(p, default_slice_half_width(p), default_slice_resolution(p.spatial_dim()), r.total);
        report["slice"] = to_json(s);
        if (!s.caveat && s.bound_holds && !*s.bound_holds) status = verification_failed;
    }
    if (expected) {
        const bool pass = r.stable && r.total == *expected;
        report["assert"] = {{"expected", *expected}, {"ok", pass}};
        if (!pass && status == ok) status = assertion_failed;
    }
    emit(report);
    std::cerr << "N = " << r.total << " (" << r.positive << " positive, " << r.negative << " negative)"
              << (r.stable ? "" : " UNSTABLE") << "\n";
    return status;
}

int cmd_scan(const SpecArgs& args, std::optional<int> target, const std::string& grid_text,
             const std::string& schedule_text, bool as_json) {
    ConstructionSpec spec = make_spec(args, false);
    const int want = target ? *target : target_count(spec).value_or(-1);
    if (want < 0) throw InvalidArgument("family " + to_string(spec.family) + " has no default target; pass --target");
    const auto grid = grid_text.empty() ? default_eps_grid(spec.family, spec.d) : parse_rational_list(grid_text);
    std::optional<std::vector<int>> schedule;
    if (!schedule_text.empty()) schedule = parse_int_list(schedule_text);
    const ScanReport r = scan_epsilon(spec, grid, want, schedule);
    if (as_json) {
        json j = to_json(r);
        j["spec"] = to_json(spec);
        emit(j);
    } else {
        std::cout << "eps,count,stable,admissible\n";
        for (const auto& row : r.rows)
            std::cout << to_string(row.eps) << "," << row.count << "," << (row.stable ? "true" : "false") << ","
                      << (row.admissible ? "true" : "false") << "\n";
        std::cout << "# largest_admissible=" << (r.largest_admissible ? to_string(*r.largest_admissible) : "none")
                  << "\n";
    }
    std::cerr << (r.flagged() ? "no admissible eps in grid" : "largest admissible eps = " + to_string(*r.largest_admissible))
              << "\n";
    return r.flagged() ? assertion_failed : ok;
}

int cmd_export(const Source& src, int resolution, double delta, const std::string& out_path, double gap) {
    const Loaded in = load(src);
    const auto cloud = export_nodal_pointcloud(in.poly, resolution, delta);
    if (out_path.empty() || out_path == "-") {
        write_pointcloud_csv(std::cout, cloud);
    } else {
        std::ofstream out(out_path);
        if (!out) throw InvalidArgument("cannot write " + out_path);
        write_pointcloud_csv(out, cloud);
        emit({{"source", in.source},
              {"points", cloud.size()},
              {"clusters", single_linkage_clusters(cloud, gap)},
              {"gap", gap},
              {"resolution", resolution},
              {"delta", delta},
              {"csv", out_path}});
    }
    if (cloud.empty()) std::cerr << "warning: no nodal points found in the annulus\n";
    else std::cerr << cloud.size() << " points\n";
    return ok;
}

int cmd_bounds(int n, unsigned d, std::optional<int> counted) {
    try {
        emit(to_json(bounds_report(n, d, counted)));
    } catch (const BoundViolation& ex) {
        emit({{"n", n}, {"d", d}, {"violation", ex.what()}});
        std::cerr << ex.what() << "\n";
        return verification_failed;
    }
    return ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Homogeneous caloric polynomials: generation, verification and nodal-domain counting"};
    app.require_subcommand(1);

    SpecArgs gen_args;
    std::string gen_out;
    bool gen_text = false;
    auto* gen = app.add_subcommand("gen", "build a polynomial from a construction family");
    gen->add_option("family", gen_args.family, "basic, lewy, odd, zero-mod4, high-dim, product or fixture")->required();
    gen->add_option("id", gen_args.fixture_id, "fixture id (family fixture)");
    add_spec_options(gen, gen_args);
    gen->add_option("-o,--out", gen_out, "write the canonical JSON polynomial here");
    gen->add_flag("--text", gen_text, "print only the expression");

    Source verify_src;
    auto* verify = app.add_subcommand("verify", "exact caloric, chain, eigenfunction and degree checks");
    add_source_options(verify, verify_src);

    Source count_src;
    std::string count_schedule;
    bool count_slice = false;
    std::optional<int> count_assert;
    auto* count = app.add_subcommand("count", "count nodal domains");
    add_source_options(count, count_src);
    count->add_option("--schedule", count_schedule, "comma separated increasing resolutions");
    count->add_flag("--slice", count_slice, "add the t = -1 slice diagnostic");
    count->add_option("--assert", count_assert, "exit 3 unless the stable count equals N");

    SpecArgs scan_args;
    std::optional<int> scan_target;
    std::string scan_grid, scan_schedule;
    bool scan_json = false;
    auto* scan = app.add_subcommand("scan", "sweep eps for a construction family");
    scan->add_option("family", scan_args.family)->required();
    add_spec_options(scan, scan_args);
    scan->add_option("--target", scan_target, "required nodal count (family default otherwise)");
    scan->add_option("--eps-grid", scan_grid, "comma separated eps values (default 1/4,...,1/64)");
    scan->add_option("--schedule", scan_schedule, "comma separated increasing resolutions");
    scan->add_flag("--json", scan_json, "JSON instead of CSV");

    Source export_src;
    int export_res = 256;
    double export_delta = 0.2;
    double export_gap = 0.05;
    std::string export_out;
    auto* exp = app.add_subcommand("export", "nodal point cloud in the unit annulus (n = 2)");
    add_source_options(exp, export_src);
    exp->add_option("--resolution", export_res, "latitude rows per shell");
    exp->add_option("--delta", export_delta, "annulus width");
    exp->add_option("-o,--out", export_out, "CSV path (stdout when omitted)");
    exp->add_option("--gap", export_gap, "single-linkage gap for the cluster count");

    int bounds_n = 0;
    unsigned bounds_d = 0;
    std::optional<int> bounds_counted;
    auto* bounds = app.add_subcommand("bounds", "minimum, product lower and Courant upper bounds");
    bounds->add_option("-n,--dim", bounds_n)->required();
    bounds->add_option("-d,--degree", bounds_d)->required();
    bounds->add_option("--counted", bounds_counted, "check a count against the bounds");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return config_error;
    }

    try {
        if (*gen) return cmd_gen(gen_args, gen_out, gen_text);
        if (*verify) return cmd_verify(verify_src);
        if (*count) return cmd_count(count_src, count_schedule, count_slice, count_assert);
        if (*scan) return cmd_scan(scan_args, scan_target, scan_grid, scan_schedule, scan_json);
        if (*exp) return cmd_export(export_src, export_res, export_delta, export_out, export_gap);
        if (*bounds) return cmd_bounds(bounds_n, bounds_d, bounds_counted);
    } catch (const BoundViolation& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return verification_failed;
    } catch (const NotHomogeneous& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return verification_failed;
    } catch (const Error& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return config_error;
    } catch (const nlohmann::json::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return config_error;
    }
    return ok;
}
