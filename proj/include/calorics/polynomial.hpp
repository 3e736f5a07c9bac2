#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <span>
#include <vector>

#include "calorics/rational.hpp"

namespace calorics {

/// Exponents of the monomial t^k x^alpha.
struct ExponentVector {
    unsigned t_exp = 0;
    std::vector<unsigned> space;

    ExponentVector() = default;
    ExponentVector(unsigned k, std::vector<unsigned> alpha) : t_exp(k), space(std::move(alpha)) {}

    unsigned spatial_degree() const;
    /// 2k + |alpha|
    unsigned parabolic_weight() const { return 2 * t_exp + spatial_degree(); }
    /// k + |alpha|
    unsigned algebraic_degree() const { return t_exp + spatial_degree(); }

    bool operator==(const ExponentVector&) const = default;
};

/// Canonical term order: higher powers of t first, then lexicographically larger alpha first.
struct CanonicalOrder {
    bool operator()(const ExponentVector& a, const ExponentVector& b) const;
};

/// Selects one of the variables x_1..x_n (axis 0..n-1) or t.
class Var {
public:
    static Var x(int axis) { return Var(axis); }
    static Var t() { return Var(-1); }

    bool is_time() const { return axis_ < 0; }
    int axis() const { return axis_; }

    bool operator==(const Var&) const = default;

private:
    explicit Var(int axis) : axis_(axis) {}
    int axis_;
};

/// Sparse polynomial in (x_1, ..., x_n, t) with exact rational coefficients.
/// No zero coefficient is ever stored; the zero polynomial has no terms.
class Polynomial {
public:
    using Terms = std::map<ExponentVector, Rational, CanonicalOrder>;

    explicit Polynomial(int spatial_dim);

    static Polynomial constant(int spatial_dim, const Rational& c);
    static Polynomial variable(int spatial_dim, Var v);
    static Polynomial monomial(int spatial_dim, ExponentVector e, const Rational& c);

    int spatial_dim() const { return n_; }
    const Terms& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }
    bool depends_on_time() const;

    Rational coefficient(const ExponentVector& e) const;
    /// Adds c * monomial(e); drops the entry if the coefficient cancels.
    void add_term(const ExponentVector& e, const Rational& c);

    /// Largest algebraic degree k + |alpha| over all terms (0 for the zero polynomial).
    unsigned algebraic_degree() const;
    unsigned max_t_exponent() const;

    Polynomial& operator+=(const Polynomial& q);
    Polynomial& operator-=(const Polynomial& q);
    Polynomial& operator*=(const Rational& c);

    friend Polynomial operator+(Polynomial p, const Polynomial& q) { return p += q; }
    friend Polynomial operator-(Polynomial p, const Polynomial& q) { return p -= q; }
    friend Polynomial operator*(const Polynomial& p, const Polynomial& q);
    friend Polynomial operator*(Polynomial p, const Rational& c) { return p *= c; }
    friend Polynomial operator*(const Rational& c, Polynomial p) { return p *= c; }
    friend Polynomial operator-(Polynomial p) { return p *= Rational(-1); }

    bool operator==(const Polynomial& q) const;

private:
    void check_key(const ExponentVector& e) const;

    int n_;
    Terms terms_;
};

Polynomial pow(const Polynomial& p, unsigned e);
Polynomial scale(const Polynomial& p, const Rational& c);

/// Throws DimensionMismatch when the spatial dimensions differ.
void require_same_dim(const Polynomial& p, const Polynomial& q);

Polynomial partial(const Polynomial& p, Var v);
/// Sum of second derivatives in the spatial variables.
Polynomial laplacian(const Polynomial& p);
/// d/dt p - Laplacian(p).
Polynomial heat_apply(const Polynomial& p);

/// The common weight 2k + |alpha| of all terms. Throws ZeroPolynomial or NotHomogeneous.
unsigned parabolic_degree(const Polynomial& p);

/// Point (x_1, ..., x_n, t).
struct RationalPoint {
    std::vector<Rational> coords;
};

Rational evaluate(const Polynomial& p, const RationalPoint& pt);
/// Double-precision value; the point is ordered (x_1, ..., x_n, t).
double evaluate_float(const Polynomial& p, std::span<const double> pt);

/// Replaces x_i and t by the given polynomials (all of one common spatial dimension).
Polynomial compose(const Polynomial& p, std::span<const Polynomial> x_images, const Polynomial& t_image);

/// p composed with x_i -> c x_i - s x_j, x_j -> s x_i + c x_j. Requires c^2 + s^2 = 1 exactly.
Polynomial rotate_xy(const Polynomial& p, int i, int j, const Rational& c, const Rational& s);

/// Rewrites p in the spatial variables of an m-dimensional space: x_k -> x_{axis_map[k]}.
Polynomial embed(const Polynomial& p, int target_dim, std::span<const int> axis_map);

/// Substitutes a value for t; the result has no t-dependence.
Polynomial substitute_time(const Polynomial& p, const Rational& value);
/// x_axis -> factor * x_axis.
Polynomial scale_axis(const Polynomial& p, int axis, const Rational& factor);

/// [p_m, ..., p_0] with p = sum_j t^j p_j; p_m != 0. Empty for the zero polynomial.
std::vector<Polynomial> t_coefficients(const Polynomial& p);
/// Inverse of t_coefficients: sum_j t^j p_j for a list ordered from the highest power down.
Polynomial from_t_coefficients(std::span<const Polynomial> coeffs, int spatial_dim);

/// Moves all coefficients to integers by a positive factor, returning the factor used.
Rational clear_denominators(Polynomial& p);

}  // namespace calorics
