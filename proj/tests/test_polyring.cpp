#include <doctest.h>

#include "calorics/caloric.hpp"
#include "calorics/constructions.hpp"
#include "calorics/errors.hpp"
#include "calorics/poly_io.hpp"
#include "support/oracles.hpp"

using namespace calorics;

namespace {

Polynomial P(const char* text, int n) { return parse_poly(text, n); }

const char* const kExample23 = "t^2 + t*x^2 + 1/12*x^4";

}  // namespace

TEST_SUITE("rational") {
    TEST_CASE("parse and print") {
        CHECK(parse_rational("3") == 3);
        CHECK(parse_rational("-6/8") == Rational(-3, 4));
        CHECK(to_string(Rational(-3, 4)) == "-3/4");
        CHECK(to_string(parse_rational("10/5")) == "2");
        CHECK_THROWS_AS(parse_rational("1/0"), InvalidArgument);
        CHECK_THROWS_AS(parse_rational("x"), InvalidArgument);
        CHECK_THROWS_AS(parse_rational(""), InvalidArgument);
    }

    TEST_CASE("doubles convert exactly") {
        CHECK(rational_from_double(0.5) == Rational(1, 2));
        CHECK(rational_from_double(-0.375) == Rational(-3, 8));
        const Rational tenth = rational_from_double(0.1);
        CHECK(tenth != Rational(1, 10));
        CHECK(tenth.get_d() == 0.1);
        CHECK(factorial(6) == 720);
    }
}

TEST_SUITE("parse_poly") {
    TEST_CASE("fixture expressions") {
        const Polynomial p = P(kExample23, 1);
        CHECK(p.size() == 3);
        CHECK(p.coefficient(ExponentVector(0, {4})) == Rational(1, 12));
        CHECK(P("0", 2).is_zero());
        CHECK(P("0", 2).terms().empty());
        CHECK(P("12*t^2+12*t*x^2+x^4+y^4-6*y^2*z^2+z^4", 3).size() == 6);
    }

    TEST_CASE("juxtaposition, parentheses and indexed names") {
        CHECK(P("150t(3x+y)", 2) == P("450*t*x + 150*t*y", 2));
        CHECK(P("2xy^2", 2) == P("2*x*y^2", 2));
        CHECK(P("x1*x4 - t", 4).spatial_dim() == 4);
        CHECK(P("(x+y)^(2)", 2) == P("x^2 + 2xy + y^2", 2));
        CHECK(P("x/2 - -x", 1) == P("3/2 x", 1));
        CHECK(P("  t  ", 1) == Polynomial::variable(1, Var::t()));
    }

    TEST_CASE("errors carry positions") {
        try {
            P("t + q", 1);
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.position() == 4);
            CHECK(std::string(e.what()).find("unknown variable") != std::string::npos);
        }
        CHECK_THROWS_AS(P("x^-1", 1), ParseError);
        CHECK_THROWS_AS(P("x^y", 2), ParseError);
        CHECK_THROWS_AS(P("x/y", 2), ParseError);
        CHECK_THROWS_AS(P("x/0", 1), ParseError);
        CHECK_THROWS_AS(P("(x+1", 1), ParseError);
        CHECK_THROWS_AS(P("x +", 1), ParseError);
        CHECK_THROWS_AS(P("y", 1), ParseError);
        CHECK_THROWS_AS(P("x5", 4), ParseError);
        CHECK_THROWS_AS(P("x^99999", 1), ParseError);
        CHECK_THROWS_AS(P("x", 0), InvalidArgument);
    }

    TEST_CASE("canonical text round trip") {
        CHECK(to_string(basic_hcp(4)) == kExample23);
        CHECK(to_string(Polynomial(2)) == "0");
        CHECK(to_string(P("-x + 1", 1)) == "-x + 1");
        for (unsigned seed = 1; seed <= 40; ++seed) {
            const int n = 1 + static_cast<int>(seed % 4);
            const Polynomial p = oracle::random_polynomial(seed, n, 6, 7);
            CHECK(P(to_string(p).c_str(), n) == p);
        }
    }

    TEST_CASE("json round trip is bit exact") {
        for (unsigned seed = 1; seed <= 40; ++seed) {
            const int n = 1 + static_cast<int>(seed % 3);
            const Polynomial p = oracle::random_polynomial(seed, n, 6, 6);
            const auto j = to_json(p);
            CHECK(polynomial_from_json(j) == p);
            CHECK(polynomial_from_json(nlohmann::json::parse(j.dump())) == p);
        }
        const auto j = to_json(P("1/3 t x", 1));
        CHECK(j["n"] == 1);
        CHECK(j["terms"][0]["num"] == "1");
        CHECK(j["terms"][0]["den"] == "3");
        CHECK_THROWS(polynomial_from_json(nlohmann::json{{"n", 1}, {"terms", {{{"k", 0}, {"alpha", {1, 2}}, {"num", "1"}, {"den", "1"}}}}}));
    }
}

TEST_SUITE("arithmetic") {
    TEST_CASE("products and inverses") {
        CHECK(P("t + x^2/2", 2) * P("t + y^2/2", 2) == P("t^2 + t(x^2+y^2)/2 + x^2y^2/4", 2));
        CHECK(P("2t+x^2", 2) * P("2t+y^2", 2) == P("4t^2 + 2t(x^2+y^2) + x^2 y^2", 2));
        const Polynomial p = oracle::random_polynomial(7, 2, 5, 6);
        CHECK((p + scale(p, Rational(-1))).is_zero());
        CHECK_THROWS_AS(P("x", 1) + P("x", 2), DimensionMismatch);
        CHECK_THROWS_AS(P("x", 1) * P("x", 2), DimensionMismatch);
        CHECK(pow(P("x+1", 1), 0) == P("1", 1));
    }

    TEST_CASE("ring laws on random polynomials") {
        for (unsigned seed = 1; seed <= 25; ++seed) {
            const Polynomial a = oracle::random_polynomial(seed, 2, 4, 4);
            const Polynomial b = oracle::random_polynomial(seed + 100, 2, 4, 4);
            const Polynomial c = oracle::random_polynomial(seed + 200, 2, 4, 4);
            CHECK(a * b == b * a);
            CHECK(a * (b + c) == a * b + a * c);
            CHECK((a + b) + c == a + (b + c));
            const RationalPoint pt{{Rational(1, 3), Rational(-2, 5), Rational(3, 7)}};
            CHECK(evaluate(a * b, pt) == evaluate(a, pt) * evaluate(b, pt));
        }
    }

    TEST_CASE("derivatives") {
        CHECK(partial(P(kExample23, 1), Var::t()) == P("2t + x^2", 1));
        CHECK(partial(P("5", 2), Var::x(0)).is_zero());
        CHECK(partial(partial(P("x^4/12", 1), Var::x(0)), Var::x(0)) == P("x^2", 1));
        CHECK_THROWS_AS(partial(P("x", 1), Var::x(1)), InvalidArgument);
        CHECK(heat_apply(P(kExample23, 1)).is_zero());
        CHECK(heat_apply(P("t", 1)) == P("1", 1));
        CHECK(heat_apply(P("x^2", 1)) == P("-2", 1));
        for (unsigned seed = 1; seed <= 20; ++seed) {
            const Polynomial a = oracle::random_polynomial(seed, 2, 5, 5);
            const Polynomial b = oracle::random_polynomial(seed + 50, 2, 5, 5);
            // Leibniz rule
            CHECK(partial(a * b, Var::x(1)) == partial(a, Var::x(1)) * b + a * partial(b, Var::x(1)));
            CHECK(partial(partial(a, Var::x(0)), Var::t()) == partial(partial(a, Var::t()), Var::x(0)));
        }
    }

    TEST_CASE("parabolic degree") {
        CHECK(parabolic_degree(P(kExample23, 1)) == 4);
        CHECK(parabolic_degree(fixture("n2d3")) == 3);
        CHECK(parabolic_degree(P("7", 2)) == 0);
        try {
            parabolic_degree(P("t + x", 1));
            FAIL("expected NotHomogeneous");
        } catch (const NotHomogeneous& e) {
            const int lo = std::min(e.first_weight(), e.second_weight());
            const int hi = std::max(e.first_weight(), e.second_weight());
            CHECK(lo == 1);
            CHECK(hi == 2);
        }
        CHECK_THROWS_AS(parabolic_degree(Polynomial(1)), ZeroPolynomial);
    }

    TEST_CASE("evaluation") {
        CHECK(evaluate(P("2t+x^2", 1), {{Rational(1), Rational(-1, 2)}}) == 0);
        CHECK(evaluate(fixture("n3d4"), {{Rational(0), Rational(0), Rational(0), Rational(1)}}) == 12);
        const Polynomial p4 = basic_hcp(4);
        CHECK(evaluate(p4, {{Rational(2), Rational(4)}}) == 16 * evaluate(p4, {{Rational(1), Rational(1)}}));
        CHECK(evaluate(p4, {{Rational(1), Rational(1)}}) == Rational(1) + 1 + Rational(1, 12));
        CHECK_THROWS_AS(evaluate(p4, {{Rational(1)}}), DimensionMismatch);
        const double pt[] = {0.3, -1.7};
        CHECK(evaluate_float(p4, pt) == doctest::Approx(oracle::eval_terms(p4, pt)).epsilon(1e-14));
        const double bad[] = {0.3};
        CHECK_THROWS_AS(evaluate_float(p4, bad), DimensionMismatch);
    }

    TEST_CASE("parabolic homogeneity holds pointwise") {
        for (unsigned d = 0; d <= 9; ++d) {
            const Polynomial p = basic_hcp(d);
            const Rational lam(3, 2), x(2, 7), t(-5, 3);
            const Rational lhs = evaluate(p, {{lam * x, lam * lam * t}});
            Rational lam_d = 1;
            for (unsigned k = 0; k < d; ++k) lam_d *= lam;
            CHECK(lhs == lam_d * evaluate(p, {{x, t}}));
        }
    }
}

TEST_SUITE("transforms") {
    TEST_CASE("rotation") {
        const int axis0[] = {0};
        const Polynomial p3 = embed(basic_hcp(3), 2, axis0);
        CHECK(rotate_xy(p3, 0, 1, Rational(1), Rational(0)) == p3);
        CHECK_THROWS_AS(rotate_xy(p3, 0, 1, Rational(1, 2), Rational(1, 2)), NotOnUnitCircle);
        CHECK_THROWS_AS(rotate_xy(p3, 0, 0, Rational(1), Rational(0)), InvalidArgument);
        // The rotated p_3 is the perturbation term of the n2d3 fixture, up to scale.
        const Polynomial rotated = rotate_xy(p3, 0, 1, Rational(3, 5), Rational(4, 5));
        CHECK(rotated == P("t(3/5 x - 4/5 y) + (3/5 x - 4/5 y)^3/6", 2));
        const Polynomial p4 = embed(basic_hcp(4), 2, axis0);
        const Rational c(3, 5), s(4, 5);
        CHECK(heat_apply(rotate_xy(p4, 0, 1, c, s)) == rotate_xy(heat_apply(p4), 0, 1, c, s));
        CHECK(heat_apply(rotate_xy(p4, 0, 1, c, s)).is_zero());
        // Composition of rotations is the rotation by the product angle.
        const Polynomial twice = rotate_xy(rotate_xy(p4, 0, 1, c, s), 0, 1, c, s);
        CHECK(twice == rotate_xy(p4, 0, 1, c * c - s * s, 2 * c * s));
    }

    TEST_CASE("t coefficients") {
        const auto co = t_coefficients(P(kExample23, 1));
        REQUIRE(co.size() == 3);
        CHECK(co[0] == P("1", 1));
        CHECK(co[1] == P("x^2", 1));
        CHECK(co[2] == P("x^4/12", 1));
        const auto cubic = t_coefficients(P("x^3", 1));
        REQUIRE(cubic.size() == 1);
        CHECK(cubic[0] == P("x^3", 1));
        CHECK(t_coefficients(Polynomial(2)).empty());
        CHECK(t_coefficients(fixture("n2d4"))[0] == P("7500", 2));
        for (unsigned seed = 1; seed <= 20; ++seed) {
            const Polynomial p = oracle::random_polynomial(seed, 3, 6, 6);
            CHECK(from_t_coefficients(t_coefficients(p), 3) == p);
        }
    }

    TEST_CASE("embedding, substitution and denominators") {
        const int map[] = {2};
        CHECK(embed(P("x^2 + t", 1), 3, map) == P("z^2 + t", 3));
        const int bad[] = {3};
        CHECK_THROWS_AS(embed(P("x", 1), 3, bad), InvalidArgument);
        CHECK(substitute_time(basic_hcp(2), Rational(-1)) == P("x^2/2 - 1", 1));
        CHECK(scale_axis(P("x^2 + x y", 2), 0, Rational(2)) == P("4x^2 + 2xy", 2));
        Polynomial q = P("x/6 + t/4", 1);
        CHECK(clear_denominators(q) == 12);
        CHECK(q == P("2x + 3t", 1));
        Polynomial r = P("4x + 6t", 1);
        CHECK(clear_denominators(r) == Rational(1, 2));
        std::vector<Polynomial> images{P("x + y", 2), P("x - y", 2)};
        CHECK(compose(P("x y + t", 2), images, P("2t", 2)) == P("x^2 - y^2 + 2t", 2));
    }
}
