#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "calorics/polynomial.hpp"

namespace calorics {

enum class Family { basic, lewy, odd, zero_mod_4, high_dim, product, fixture };

/// Accepts the canonical tags ("zero_mod_4") and CLI spellings ("zero-mod4").
Family parse_family(const std::string& name);
std::string to_string(Family f);

enum class SeedKind { real_part, imag_part };

SeedKind parse_seed_kind(const std::string& name);
std::string to_string(SeedKind k);

struct HarmonicSeed {
    unsigned d = 1;
    SeedKind kind = SeedKind::imag_part;
};

/// A rotation (c, s) with c^2 + s^2 = 1 exactly.
///
/// Exact rotations come from a Pythagorean pair given by the caller. Angle
/// rotations approximate the requested angle by the rational point
/// ((1 - m^2)/(1 + m^2), 2m/(1 + m^2)) with m a best rational approximation of
/// tan(angle/2); they stay exactly on the unit circle but only approximate the
/// angle, so `exact` is false and `angle_error` records the discrepancy.
struct Rotation {
    Rational c{1};
    Rational s{0};
    bool exact = true;
    std::optional<double> angle;
    double angle_error = 0.0;

    static Rotation pair(const Rational& c, const Rational& s);
    static Rotation from_angle(double radians, long max_denominator = 1000);
    static Rotation identity() { return {}; }

    /// "p/q,p/q" or "angle:<radians>"; "pi/10"-style values are accepted after "angle:".
    static Rotation parse(const std::string& text);
};

struct ConstructionSpec {
    Family family = Family::basic;
    unsigned d = 0;
    int n = 1;
    Rational eps{0};
    /// eps was supplied as a float (its exact binary value is used).
    bool eps_from_float = false;
    Rotation rot = Rotation::pair(Rational(3, 5), Rational(4, 5));
    SeedKind kind = SeedKind::real_part;
    std::string fixture_id;
};

nlohmann::json to_json(const ConstructionSpec& spec);
ConstructionSpec construction_spec_from_json(const nlohmann::json& j);

/// Re or Im of (x + iy)^d, integer coefficients, n = 2.
Polynomial harmonic_2d(const HarmonicSeed& seed);

/// Im((x+iy)^d) - eps p_d(x,t); d = 2 mod 4.
Polynomial lewy_2mod4(unsigned d, const Rational& eps);

/// y p_{d-1}(x,t) - eps p_d(c x - s y, t); d odd, d >= 3.
Polynomial odd_construction(unsigned d, const Rational& eps, const Rotation& rot);

/// p_{2k}(x,t) p_{2k}(y,t) + eps p_{2k+1}(c x - s y, t) p_{2k-1}(s x + c y, t); d = 4k >= 4.
Polynomial zero_mod4(unsigned d, const Rational& eps, const Rotation& rot);

/// phi(x,y) + p_d(z,t) with phi = harmonic_2d(d, kind), placed in n >= 3 space dimensions.
Polynomial high_dim(unsigned d, SeedKind kind, int n = 3);

/// p_b(x_n,t) prod_{i<n} p_c(x_i,t) with c = floor(d/n) >= 2 and b = d - (n-1)c.
Polynomial product_lower(int n, unsigned d);

/// Integer-coefficient reference polynomials (see fixture_ids()), plus basic_<d> for d <= 8.
Polynomial fixture(const std::string& id);
std::vector<std::string> fixture_ids();

/// Nodal-domain count the construction is built to achieve, if the family has one.
std::optional<int> target_count(const ConstructionSpec& spec);

/// Default epsilon for zero_mod_4 d = 4 (1/5), odd d = 5 (3/10) and lewy d = 6 (1/20).
std::optional<Rational> default_epsilon(Family family, unsigned d);

Polynomial build(const ConstructionSpec& spec);

/// The rational r with q == r * p (scale taken from one term, then checked on every term).
std::optional<Rational> scalar_multiple(const Polynomial& q, const Polynomial& p);

}  // namespace calorics
