// Acceptance run: one PASS/FAIL line per criterion.
#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "calorics/caloric.hpp"
#include "calorics/constructions.hpp"
#include "calorics/errors.hpp"
#include "calorics/nodal.hpp"
#include "calorics/poly_io.hpp"
#include "support/oracles.hpp"

using namespace calorics;

namespace {

// Pinned limits and tolerances.
constexpr double kLimitIdentities = 5.0;
constexpr double kLimitOneD = 30.0;
constexpr double kLimitFixtures = 120.0;
constexpr double kLimitFigures = 180.0;
constexpr double kLimitInterlacing = 5.0;
constexpr double kQuadratureRelTol = 1e-10;
constexpr double kReconstructionTol = 1e-10;
constexpr double kInterlacingGap = 1e-9;
constexpr double kClusterGap = 0.05;
constexpr int kExportResolution = 256;
constexpr int kSphereRows = 512;
constexpr int kSphereCols = 1024;

struct Outcome {
    bool pass = true;
    std::string detail;

    void fail(const std::string& why) {
        if (pass) detail.clear();
        if (!detail.empty()) detail += "; ";
        detail += why;
        pass = false;
    }
    void note(const std::string& what) {
        if (!pass) return;
        if (!detail.empty()) detail += "; ";
        detail += what;
    }
};

struct Counted {
    std::string name;
    Polynomial poly;
    ComponentReport report;
};

// Every nodal count taken in this run, for the bound checks.
std::vector<Counted>& ledger() {
    static std::vector<Counted> all;
    return all;
}

ComponentReport counted(const std::string& name, const Polynomial& p) {
    for (const auto& c : ledger())
        if (c.name == name && c.poly == p) return c.report;
    const ComponentReport r = nodal_count(p);
    ledger().push_back({name, p, r});
    return r;
}

std::string show(const ComponentReport& r) {
    std::ostringstream s;
    s << r.total << " (" << r.positive << "+/" << r.negative << "-)" << (r.stable ? "" : " unstable");
    return s.str();
}

void expect_count(Outcome& o, const std::string& name, const Polynomial& p, int want) {
    const ComponentReport r = counted(name, p);
    if (r.total != want || !r.stable)
        o.fail(name + ": N = " + show(r) + ", expected " + std::to_string(want));
}

const Rotation kPair = Rotation::pair(Rational(3, 5), Rational(4, 5));

Polynomial reference_lewy() { return lewy_2mod4(6, Rational(1, 20)); }
Polynomial reference_odd() { return odd_construction(5, Rational(3, 10), Rotation::from_angle(std::numbers::pi / 10)); }
Polynomial reference_zero_mod4() { return zero_mod4(4, Rational(1, 5), Rotation::from_angle(std::numbers::pi / 10)); }

// ---------------------------------------------------------------------------

Outcome identities() {
    Outcome o;
    for (unsigned d = 0; d <= 20; ++d) {
        if (!heat_apply(basic_hcp(d)).is_zero()) o.fail("heat residual for p_" + std::to_string(d));
        const auto h = hermite_relation_check(d);
        if (!h.ok) o.fail("hermite relation d = " + std::to_string(d) + ": " + h.detail);
    }
    int checked = 0;
    for (int n = 1; n <= 3; ++n)
        for (unsigned d = 0; d <= 6; ++d)
            for (const auto& p : basis(n, d)) {
                ++checked;
                if (!chain_check(p).ok) o.fail("chain fails for a basis element, n = " + std::to_string(n) + ", d = " + std::to_string(d));
                const auto e = eigen_check(p);
                if (!e.ok) o.fail("eigen identity: " + e.detail);
            }
    o.note("p_0..p_20 exact, " + std::to_string(checked) + " basis elements");
    return o;
}

Outcome dimensions() {
    Outcome o;
    for (int n = 1; n <= 4; ++n)
        for (unsigned d = 0; d <= 8; ++d) {
            BigInt want;
            mpz_bin_uiui(want.get_mpz_t(), n - 1 + d, n - 1);
            const auto got = basis(n, d).size();
            if (BigInt(static_cast<unsigned long>(got)) != want)
                o.fail("n = " + std::to_string(n) + ", d = " + std::to_string(d) + ": " + std::to_string(got) +
                       " != " + want.get_str());
        }
    o.note("n <= 4, d <= 8");
    return o;
}

Outcome orthogonality() {
    Outcome o;
    std::vector<Polynomial> all;
    for (unsigned d = 0; d <= 4; ++d)
        for (const auto& p : basis(2, d)) all.push_back(p);
    for (std::size_t i = 0; i < all.size(); ++i)
        for (std::size_t j = i; j < all.size(); ++j) {
            const Rational r = weighted_inner_product(all[i], all[j]).rational_part;
            if (i == j && r <= 0) o.fail("diagonal entry " + std::to_string(i) + " not positive");
            if (i != j && r != 0) o.fail("entries " + std::to_string(i) + "," + std::to_string(j) + " = " + to_string(r));
        }
    double worst = 0;
    for (unsigned m = 0; m <= 8; ++m) {
        const double exact = gaussian_moment(2 * m).get_d();
        const double quad = oracle::gaussian_moment_quadrature(m);
        worst = std::max(worst, std::fabs(exact - quad) / std::fabs(exact));
    }
    if (worst > kQuadratureRelTol) o.fail("moment quadrature rel. error " + std::to_string(worst));
    std::ostringstream s;
    s << all.size() << "x" << all.size() << " Gram matrix diagonal; quadrature rel. error " << worst;
    o.note(s.str());
    return o;
}

Outcome one_d_counts() {
    Outcome o;
    for (unsigned d = 2; d <= 8; ++d)
        expect_count(o, "basic_" + std::to_string(d), basic_hcp(d), 2 * static_cast<int>((d + 1) / 2));
    o.note("2 <= d <= 8");
    return o;
}

Outcome fixtures() {
    Outcome o;
    expect_count(o, "n2d3", fixture("n2d3"), 2);
    expect_count(o, "n2d4", fixture("n2d4"), 3);
    expect_count(o, "n3d4", fixture("n3d4"), 2);
    expect_count(o, "deg2", fixture("deg2"), 2);
    expect_count(o, "deg2_n2_j1", fixture("deg2_n2_j1"), 2);
    expect_count(o, "prod_n2d4", fixture("prod_n2d4"), 6);
    o.note("all stable");
    return o;
}

Outcome reference_constructions() {
    Outcome o;
    expect_count(o, "lewy(6, 1/20)", reference_lewy(), 2);
    expect_count(o, "odd(5, 3/10, pi/10)", reference_odd(), 2);
    expect_count(o, "zero_mod4(4, 1/5, pi/10)", reference_zero_mod4(), 3);
    const std::pair<const char*, double> deltas[] = {{"lewy", 0.05}, {"odd", 0.2}, {"zero_mod4", 0.2}};
    const Polynomial polys[] = {reference_lewy(), reference_odd(), reference_zero_mod4()};
    for (int k = 0; k < 3; ++k) {
        const auto cloud = export_nodal_pointcloud(polys[k], kExportResolution, deltas[k].second);
        if (cloud.empty()) o.fail(std::string(deltas[k].first) + " point cloud is empty");
        if (k == 2) {
            const int clusters = single_linkage_clusters(cloud, kClusterGap);
            if (clusters != 2) o.fail("zero_mod4 cloud has " + std::to_string(clusters) + " clusters");
            else o.note("zero_mod4 cloud: " + std::to_string(cloud.size()) + " points in 2 clusters");
        }
    }
    return o;
}

Outcome scale_match() {
    Outcome o;
    struct Case {
        const char* id;
        Polynomial construction;
        const char* label;
        Polynomial alternative;
        const char* alt_label;
    };
    const Case cases[] = {
        {"n2d3", odd_construction(3, Rational(1), kPair), "odd(3, 1, (3/5,4/5))",
         odd_construction(3, Rational(1), Rotation::pair(Rational(-3, 5), Rational(-4, 5))), "odd(3, 1, (-3/5,-4/5))"},
        {"n2d4", zero_mod4(4, Rational(1, 2), kPair), "zero_mod4(4, 1/2, (3/5,4/5))",
         Rational(2) * product_hcp({{2, 0}}) * product_hcp({{0, 2}}) -
             zero_mod4(4, Rational(1, 2), Rotation::pair(Rational(-4, 5), Rational(3, 5))),
         "the eps = -1/2 variant at (-4/5,3/5)"},
    };
    for (const auto& c : cases) {
        const Polynomial f = fixture(c.id);
        // Scale from the first term of the construction, then every term must agree.
        const auto& [e, coef] = *c.construction.terms().begin();
        const Rational scale = f.coefficient(e) / coef;
        if (scale != 0 && c.construction * scale == f) continue;
        const std::size_t mismatched = (c.construction * scale - f).size();
        std::string why = std::string(c.id) + " is not a multiple of " + c.label + " (scale " + to_string(scale) +
                          " from the leading term, " + std::to_string(mismatched) + " coefficients differ)";
        if (const auto alt = scalar_multiple(f, c.alternative)) why += "; it equals " + to_string(*alt) + " * " + c.alt_label;
        o.fail(why);
    }
    return o;
}

Outcome bound_enforcement() {
    Outcome o;
    // Make sure the whole corpus has been counted, whichever criteria ran before.
    for (unsigned d = 2; d <= 8; ++d) counted("basic_" + std::to_string(d), basic_hcp(d));
    for (const char* id : {"n2d3", "n2d4", "n3d4", "deg2", "deg2_n2_j1", "prod_n2d4"}) counted(id, fixture(id));
    counted("lewy(6, 1/20)", reference_lewy());
    counted("odd(5, 3/10, pi/10)", reference_odd());
    counted("zero_mod4(4, 1/5, pi/10)", reference_zero_mod4());
    const std::pair<int, unsigned> products[] = {{2, 4}, {2, 5}, {2, 6}, {3, 6}};
    for (const auto& [n, d] : products) {
        const std::string name = "product(" + std::to_string(n) + ", " + std::to_string(d) + ")";
        const ComponentReport r = counted(name, product_lower(n, d));
        const BoundsReport b = bounds_report(n, d);
        if (BigInt(r.total) < b.product_lower)
            o.fail(name + ": N = " + show(r) + " below " + b.product_lower.get_str());
    }
    int slices = 0, caveats = 0;
    for (const auto& c : ledger()) {
        const int n = c.poly.spatial_dim();
        const unsigned d = parabolic_degree(c.poly);
        if (c.report.total < 2) o.fail(c.name + ": N = " + show(c.report) + " < 2");
        if (d >= 2) {
            try {
                bounds_report(n, d, c.report.total);
            } catch (const BoundViolation& ex) {
                o.fail(c.name + ": " + ex.what());
            }
        }
        if (d < 2 || !is_caloric(c.poly).ok()) continue;
        const SliceReport s = slice_count(c.poly, default_slice_half_width(c.poly), default_slice_resolution(n), c.report.total);
        if (s.caveat) {
            ++caveats;
            continue;
        }
        ++slices;
        if (!*s.bound_holds)
            o.fail(c.name + ": N = " + std::to_string(c.report.total) + " exceeds slice count " + std::to_string(s.count));
    }
    o.note(std::to_string(ledger().size()) + " counted polynomials; slice bound checked on " + std::to_string(slices) +
           ", caveat on " + std::to_string(caveats));
    return o;
}

Outcome interlacing() {
    Outcome o;
    double worst = 0;
    for (unsigned d = 2; d <= 16; ++d) {
        try {
            worst = std::max(worst, parabola_factors(d, kReconstructionTol).reconstruction_error);
        } catch (const ConvergenceError& ex) {
            o.fail("d = " + std::to_string(d) + ": " + ex.what());
        }
    }
    if (worst >= kReconstructionTol) o.fail("reconstruction error " + std::to_string(worst));
    for (unsigned d = 3; d <= 16; ++d) {
        const auto r = interlacing_check(d, kInterlacingGap);
        if (!r.ok) o.fail("(p_" + std::to_string(d - 1) + ", p_" + std::to_string(d) + "): " + r.detail);
    }
    std::ostringstream s;
    s << "max reconstruction error " << worst;
    o.note(s.str());
    return o;
}

Outcome sphere_oracle() {
    Outcome o;
    for (const char* id : {"n2d3", "n2d4", "prod_n2d4", "deg2_n2_j1", "deg2_n2_j2"}) {
        const Polynomial p = fixture(id);
        const ComponentReport cube = counted(id, p);
        const oracle::SphereCount sphere = oracle::sphere_grid_count(p, kSphereRows, kSphereCols);
        if (sphere.positive != cube.positive || sphere.negative != cube.negative)
            o.fail(std::string(id) + ": cube " + show(cube) + " vs sphere " + std::to_string(sphere.total()) + " (" +
                   std::to_string(sphere.positive) + "+/" + std::to_string(sphere.negative) + "-)");
    }
    o.note("5 fixtures agree");
    return o;
}

struct Criterion {
    int id;
    const char* title;
    double limit_seconds;  // 0: no limit
    std::function<Outcome()> run;
};

const std::vector<Criterion>& criteria() {
    static const std::vector<Criterion> all{
        {1, "exact identities", kLimitIdentities, identities},
        {2, "basis dimension", 0, dimensions},
        {3, "orthogonality", 0, orthogonality},
        {4, "1-D counts", kLimitOneD, one_d_counts},
        {5, "fixture counts", kLimitFixtures, fixtures},
        {6, "reference constructions", kLimitFigures, reference_constructions},
        {7, "scale match", 0, scale_match},
        {8, "bound enforcement", 0, bound_enforcement},
        {9, "interlacing and factorization", kLimitInterlacing, interlacing},
        {10, "cross-section oracle", 0, sphere_oracle},
    };
    return all;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"acceptance criteria"};
    std::vector<int> only;
    app.add_option("-c,--criterion", only, "run only these criteria (1-10)")->check(CLI::Range(1, 10));
    CLI11_PARSE(app, argc, argv);

    int failures = 0;
    for (const auto& c : criteria()) {
        if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& ex) {
            o.fail(std::string("exception: ") + ex.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.limit_seconds > 0 && secs > c.limit_seconds) {
            std::ostringstream s;
            s << "took " << secs << " s, limit " << c.limit_seconds << " s";
            o.fail(s.str());
        }
        std::printf("criterion %2d %-30s %s  [%.2f s] %s\n", c.id, c.title, o.pass ? "PASS" : "FAIL", secs,
                    o.detail.c_str());
        std::fflush(stdout);
        if (!o.pass) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
