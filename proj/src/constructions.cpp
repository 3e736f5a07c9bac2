#include "calorics/constructions.hpp"

#include <cmath>
#include <numbers>
#include <regex>

#include "calorics/caloric.hpp"
#include "calorics/errors.hpp"
#include "calorics/poly_io.hpp"

namespace calorics {

namespace {

std::string normalized(std::string s) {
    for (auto& ch : s)
        if (ch == '-') ch = '_';
    return s;
}

void require_positive(const Rational& eps) {
    if (eps <= 0) throw InvalidArgument("epsilon must be positive, got " + to_string(eps));
}

Polynomial basic_on_axis(unsigned d, int n, int axis) {
    const int map[] = {axis};
    return embed(basic_hcp(d), n, map);
}

// p_d(a x + b y, t) in n = 2.
Polynomial basic_along(unsigned d, const Rational& a, const Rational& b) {
    const Polynomial x = Polynomial::variable(2, Var::x(0));
    const Polynomial y = Polynomial::variable(2, Var::x(1));
    const Polynomial images[] = {a * x + b * y};
    return compose(basic_hcp(d), images, Polynomial::variable(2, Var::t()));
}

// Continued-fraction best approximation with bounded denominator.
Rational best_rational(double value, long max_den) {
    long h0 = 0, h1 = 1, k0 = 1, k1 = 0;
    double x = value;
    for (int iter = 0; iter < 64; ++iter) {
        const double a_f = std::floor(x);
        const long a = static_cast<long>(a_f);
        const long h2 = a * h1 + h0;
        const long k2 = a * k1 + k0;
        if (k2 > max_den) break;
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        const double frac = x - a_f;
        if (frac < 1e-15) break;
        x = 1.0 / frac;
    }
    Rational r(h1, k1);
    r.canonicalize();
    return r;
}

double parse_angle(const std::string& text) {
    static const std::regex pi_form(R"(^\s*(-?[0-9]*\.?[0-9]*)\*?pi(?:/([0-9]+(?:\.[0-9]*)?))?\s*$)");
    std::smatch m;
    if (std::regex_match(text, m, pi_form)) {
        double mult = 1.0;
        if (m[1].length() > 0 && m[1].str() != "-") mult = std::stod(m[1].str());
        if (m[1].str() == "-") mult = -1.0;
        double den = m[2].matched ? std::stod(m[2].str()) : 1.0;
        return mult * std::numbers::pi / den;
    }
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw InvalidArgument("malformed angle '" + text + "'");
        return v;
    } catch (const std::logic_error&) {
        throw InvalidArgument("malformed angle '" + text + "'");
    }
}

}  // namespace

Family parse_family(const std::string& name) {
    const std::string s = normalized(name);
    if (s == "basic") return Family::basic;
    if (s == "lewy" || s == "lewy_2mod4") return Family::lewy;
    if (s == "odd") return Family::odd;
    if (s == "zero_mod_4" || s == "zero_mod4") return Family::zero_mod_4;
    if (s == "high_dim") return Family::high_dim;
    if (s == "product") return Family::product;
    if (s == "fixture") return Family::fixture;
    throw InvalidArgument("unknown construction family '" + name + "'");
}

std::string to_string(Family f) {
    switch (f) {
        case Family::basic: return "basic";
        case Family::lewy: return "lewy";
        case Family::odd: return "odd";
        case Family::zero_mod_4: return "zero_mod_4";
        case Family::high_dim: return "high_dim";
        case Family::product: return "product";
        case Family::fixture: return "fixture";
    }
    return "unknown";
}

SeedKind parse_seed_kind(const std::string& name) {
    const std::string s = normalized(name);
    if (s == "re" || s == "real" || s == "real_part") return SeedKind::real_part;
    if (s == "im" || s == "imag" || s == "imag_part") return SeedKind::imag_part;
    throw InvalidArgument("unknown harmonic seed kind '" + name + "'");
}

std::string to_string(SeedKind k) { return k == SeedKind::real_part ? "real_part" : "imag_part"; }

Rotation Rotation::pair(const Rational& c, const Rational& s) {
    if (c * c + s * s != 1)
        throw NotOnUnitCircle("(" + to_string(c) + ", " + to_string(s) + ") is not on the unit circle");
    Rotation r;
    r.c = c;
    r.s = s;
    return r;
}

Rotation Rotation::from_angle(double radians, long max_denominator) {
    if (!std::isfinite(radians)) throw InvalidArgument("rotation angle must be finite");
    // Reduce to (-pi, pi] so tan(angle/2) stays bounded.
    double a = std::remainder(radians, 2 * std::numbers::pi);
    if (std::fabs(std::fabs(a) - std::numbers::pi) < 1e-12) {
        Rotation r = pair(Rational(-1), Rational(0));
        r.exact = false;
        r.angle = radians;
        r.angle_error = std::fabs(std::fabs(a) - std::numbers::pi);
        return r;
    }
    const Rational m = best_rational(std::tan(a / 2), max_denominator);
    const Rational denom = 1 + m * m;
    Rotation r = pair((1 - m * m) / denom, 2 * m / denom);
    r.exact = false;
    r.angle = radians;
    r.angle_error = std::fabs(std::atan2(r.s.get_d(), r.c.get_d()) - a);
    return r;
}

Rotation Rotation::parse(const std::string& text) {
    if (text.rfind("angle:", 0) == 0) return from_angle(parse_angle(text.substr(6)));
    const auto comma = text.find(',');
    if (comma == std::string::npos) throw InvalidArgument("rotation must be 'c,s' or 'angle:<radians>'");
    return pair(parse_rational(text.substr(0, comma)), parse_rational(text.substr(comma + 1)));
}

nlohmann::json to_json(const ConstructionSpec& spec) {
    nlohmann::json j{{"family", to_string(spec.family)}, {"d", spec.d}, {"n", spec.n}};
    if (spec.eps_from_float)
        j["eps"] = spec.eps.get_d();
    else
        j["eps"] = to_string(spec.eps);
    if (spec.rot.exact)
        j["rot"] = {to_string(spec.rot.c), to_string(spec.rot.s)};
    else
        j["rot"] = spec.rot.angle.value_or(std::atan2(spec.rot.s.get_d(), spec.rot.c.get_d()));
    if (spec.family == Family::high_dim) j["kind"] = to_string(spec.kind);
    if (!spec.fixture_id.empty()) j["fixture"] = spec.fixture_id;
    return j;
}

ConstructionSpec construction_spec_from_json(const nlohmann::json& j) {
    try {
        ConstructionSpec spec;
        spec.family = parse_family(j.at("family").get<std::string>());
        spec.d = j.value("d", 0u);
        spec.n = j.value("n", 1);
        if (j.contains("eps")) {
            const auto& e = j.at("eps");
            if (e.is_string()) {
                spec.eps = parse_rational(e.get<std::string>());
            } else {
                spec.eps = rational_from_double(e.get<double>());
                spec.eps_from_float = true;
            }
        }
        if (j.contains("rot")) {
            const auto& r = j.at("rot");
            if (r.is_array())
                spec.rot = Rotation::pair(parse_rational(r.at(0).get<std::string>()),
                                          parse_rational(r.at(1).get<std::string>()));
            else
                spec.rot = Rotation::from_angle(r.get<double>());
        }
        if (j.contains("kind")) spec.kind = parse_seed_kind(j.at("kind").get<std::string>());
        if (j.contains("fixture")) spec.fixture_id = j.at("fixture").get<std::string>();
        return spec;
    } catch (const nlohmann::json::exception& ex) {
        throw InvalidArgument(std::string("malformed construction spec: ") + ex.what());
    }
}

Polynomial harmonic_2d(const HarmonicSeed& seed) {
    if (seed.d < 1) throw InvalidArgument("harmonic seed degree must be at least 1");
    // (x + iy)^d = sum_j C(d,j) x^(d-j) i^j y^j
    Polynomial p(2);
    const unsigned d = seed.d;
    BigInt binom;
    for (unsigned j = 0; j <= d; ++j) {
        const bool real = j % 2 == 0;
        if (real != (seed.kind == SeedKind::real_part)) continue;
        mpz_bin_uiui(binom.get_mpz_t(), d, j);
        const bool negative = (j % 4 == 2) || (j % 4 == 3);
        p.add_term(ExponentVector(0, {d - j, j}), Rational(negative ? -binom : binom));
    }
    return p;
}

Polynomial lewy_2mod4(unsigned d, const Rational& eps) {
    if (d % 4 != 2) throw CongruenceError("lewy construction needs d = 2 mod 4, got d = " + std::to_string(d));
    require_positive(eps);
    return harmonic_2d({d, SeedKind::imag_part}) - eps * basic_on_axis(d, 2, 0);
}

Polynomial odd_construction(unsigned d, const Rational& eps, const Rotation& rot) {
    if (d < 3 || d % 2 == 0) throw CongruenceError("odd construction needs odd d >= 3, got d = " + std::to_string(d));
    require_positive(eps);
    const Polynomial y = Polynomial::variable(2, Var::x(1));
    return y * basic_on_axis(d - 1, 2, 0) - eps * basic_along(d, rot.c, -rot.s);
}

Polynomial zero_mod4(unsigned d, const Rational& eps, const Rotation& rot) {
    if (d < 4 || d % 4 != 0) throw CongruenceError("zero-mod-4 construction needs d = 4k >= 4, got d = " + std::to_string(d));
    require_positive(eps);
    const unsigned k = d / 4;
    const Polynomial even = basic_on_axis(2 * k, 2, 0) * basic_on_axis(2 * k, 2, 1);
    const Polynomial odd = basic_along(2 * k + 1, rot.c, -rot.s) * basic_along(2 * k - 1, rot.s, rot.c);
    return even + eps * odd;
}

Polynomial high_dim(unsigned d, SeedKind kind, int n) {
    if (n < 3) throw InvalidArgument("high_dim construction lives in n >= 3 space dimensions");
    const int phi_axes[] = {0, 1};
    return embed(harmonic_2d({d, kind}), n, phi_axes) + basic_on_axis(d, n, 2);
}

Polynomial product_lower(int n, unsigned d) {
    if (n < 2) throw InvalidArgument("product construction needs n >= 2");
    const unsigned c = d / static_cast<unsigned>(n);
    if (c < 2) throw InvalidArgument("product construction needs floor(d/n) >= 2, got " + std::to_string(c));
    const unsigned b = d - static_cast<unsigned>(n - 1) * c;
    Polynomial u = basic_on_axis(b, n, n - 1);
    for (int i = 0; i < n - 1; ++i) u = u * basic_on_axis(c, n, i);
    return u;
}

std::vector<std::string> fixture_ids() {
    std::vector<std::string> ids{"deg2", "n2d3", "n2d4", "n3d4", "prod_n2d4"};
    for (unsigned d = 0; d <= 8; ++d) ids.push_back("basic_" + std::to_string(d));
    return ids;
}

Polynomial fixture(const std::string& id) {
    if (id == "n2d3") return parse_poly("150t(3x+y)+27x^3+267x^2y+144xy^2-64y^3", 2);
    if (id == "n2d4")
        return parse_poly("7500 t^2 + 150t(37x^2-7xy+13y^2) + 192 x^4 + 176 x^3 y + 1623 x^2 y^2 - 351 x y^3 - 108 y^4", 2);
    if (id == "n3d4") return parse_poly("12t^2+12tx^2+x^4+y^4-6y^2z^2+z^4", 3);
    if (id == "prod_n2d4") return parse_poly("(2t+x^2)(2t+y^2)", 2);
    static const std::regex deg2(R"(^deg2(?:_n([0-9]+))?(?:_j([0-9]+))?$)");
    static const std::regex basic(R"(^basic_([0-9]+)$)");
    std::smatch m;
    if (std::regex_match(id, m, deg2)) {
        const int n = m[1].matched ? std::stoi(m[1].str()) : 1;
        const int j = m[2].matched ? std::stoi(m[2].str()) : 1;
        if (n < 1 || j < 1 || j > n) throw InvalidArgument("unknown fixture '" + id + "'");
        return Polynomial::variable(n, Var::t()) * Rational(2) + pow(Polynomial::variable(n, Var::x(j - 1)), 2);
    }
    if (std::regex_match(id, m, basic)) {
        const int d = std::stoi(m[1].str());
        if (d <= 8) return basic_hcp(static_cast<unsigned>(d));
    }
    throw InvalidArgument("unknown fixture '" + id + "'");
}

std::optional<int> target_count(const ConstructionSpec& spec) {
    switch (spec.family) {
        case Family::lewy:
        case Family::odd:
        case Family::high_dim: return 2;
        case Family::zero_mod_4: return 3;
        case Family::basic: return 2 * static_cast<int>((spec.d + 1) / 2);
        default: return std::nullopt;
    }
}

std::optional<Rational> default_epsilon(Family family, unsigned d) {
    if (family == Family::zero_mod_4 && d == 4) return Rational(1, 5);
    if (family == Family::odd && d == 5) return Rational(3, 10);
    if (family == Family::lewy && d == 6) return Rational(1, 20);
    return std::nullopt;
}

Polynomial build(const ConstructionSpec& spec) {
    switch (spec.family) {
        case Family::basic: return basic_hcp(spec.d);
        case Family::lewy: return lewy_2mod4(spec.d, spec.eps);
        case Family::odd: return odd_construction(spec.d, spec.eps, spec.rot);
        case Family::zero_mod_4: return zero_mod4(spec.d, spec.eps, spec.rot);
        case Family::high_dim: return high_dim(spec.d, spec.kind, std::max(spec.n, 3));
        case Family::product: return product_lower(spec.n, spec.d);
        case Family::fixture: return fixture(spec.fixture_id);
    }
    throw InvalidArgument("unhandled construction family");
}

std::optional<Rational> scalar_multiple(const Polynomial& q, const Polynomial& p) {
    require_same_dim(q, p);
    if (p.is_zero()) return q.is_zero() ? std::optional<Rational>(Rational(0)) : std::nullopt;
    const auto& [e, c] = *p.terms().begin();
    const Rational r = q.coefficient(e) / c;
    if (p * r == q) return r;
    return std::nullopt;
}

}  // namespace calorics
