#include "calorics/polynomial.hpp"

#include <algorithm>
#include <numeric>

#include "calorics/errors.hpp"

namespace calorics {

unsigned ExponentVector::spatial_degree() const {
    return std::accumulate(space.begin(), space.end(), 0u);
}

bool CanonicalOrder::operator()(const ExponentVector& a, const ExponentVector& b) const {
    if (a.t_exp != b.t_exp) return a.t_exp > b.t_exp;
    return std::lexicographical_compare(b.space.begin(), b.space.end(), a.space.begin(), a.space.end());
}

Polynomial::Polynomial(int spatial_dim) : n_(spatial_dim) {
    if (spatial_dim < 1) throw InvalidArgument("spatial dimension must be at least 1");
}

Polynomial Polynomial::constant(int spatial_dim, const Rational& c) {
    Polynomial p(spatial_dim);
    p.add_term(ExponentVector(0, std::vector<unsigned>(spatial_dim, 0)), c);
    return p;
}

Polynomial Polynomial::variable(int spatial_dim, Var v) {
    ExponentVector e(0, std::vector<unsigned>(spatial_dim, 0));
    if (v.is_time()) {
        e.t_exp = 1;
    } else {
        if (v.axis() >= spatial_dim) throw InvalidArgument("variable index out of range");
        e.space[v.axis()] = 1;
    }
    Polynomial p(spatial_dim);
    p.add_term(e, Rational(1));
    return p;
}

Polynomial Polynomial::monomial(int spatial_dim, ExponentVector e, const Rational& c) {
    Polynomial p(spatial_dim);
    p.add_term(e, c);
    return p;
}

bool Polynomial::depends_on_time() const {
    return std::any_of(terms_.begin(), terms_.end(), [](const auto& kv) { return kv.first.t_exp > 0; });
}

void Polynomial::check_key(const ExponentVector& e) const {
    if (static_cast<int>(e.space.size()) != n_)
        throw DimensionMismatch("exponent vector of length " + std::to_string(e.space.size()) +
                                " in a polynomial with n = " + std::to_string(n_));
}

Rational Polynomial::coefficient(const ExponentVector& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Rational(0) : it->second;
}

void Polynomial::add_term(const ExponentVector& e, const Rational& c) {
    check_key(e);
    Rational v = c;
    v.canonicalize();
    if (v == 0) return;
    auto [it, inserted] = terms_.try_emplace(e, v);
    if (inserted) return;
    it->second += v;
    if (it->second == 0) terms_.erase(it);
}

unsigned Polynomial::algebraic_degree() const {
    unsigned d = 0;
    for (const auto& [e, c] : terms_) d = std::max(d, e.algebraic_degree());
    return d;
}

unsigned Polynomial::max_t_exponent() const {
    return terms_.empty() ? 0 : terms_.begin()->first.t_exp;
}

Polynomial& Polynomial::operator+=(const Polynomial& q) {
    require_same_dim(*this, q);
    for (const auto& [e, c] : q.terms_) add_term(e, c);
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& q) {
    require_same_dim(*this, q);
    for (const auto& [e, c] : q.terms_) add_term(e, -c);
    return *this;
}

Polynomial& Polynomial::operator*=(const Rational& c) {
    Rational k = c;
    k.canonicalize();
    if (k == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [e, v] : terms_) v *= k;
    return *this;
}

Polynomial operator*(const Polynomial& p, const Polynomial& q) {
    require_same_dim(p, q);
    Polynomial r(p.spatial_dim());
    ExponentVector e(0, std::vector<unsigned>(p.spatial_dim(), 0));
    for (const auto& [ea, ca] : p.terms_) {
        for (const auto& [eb, cb] : q.terms_) {
            e.t_exp = ea.t_exp + eb.t_exp;
            for (int i = 0; i < p.spatial_dim(); ++i) e.space[i] = ea.space[i] + eb.space[i];
            r.add_term(e, ca * cb);
        }
    }
    return r;
}

bool Polynomial::operator==(const Polynomial& q) const {
    return n_ == q.n_ && terms_ == q.terms_;
}

void require_same_dim(const Polynomial& p, const Polynomial& q) {
    if (p.spatial_dim() != q.spatial_dim())
        throw DimensionMismatch("spatial dimensions differ: " + std::to_string(p.spatial_dim()) + " vs " +
                                std::to_string(q.spatial_dim()));
}

Polynomial pow(const Polynomial& p, unsigned e) {
    Polynomial result = Polynomial::constant(p.spatial_dim(), Rational(1));
    Polynomial base = p;
    while (e > 0) {
        if (e & 1u) result = result * base;
        e >>= 1;
        if (e > 0) base = base * base;
    }
    return result;
}

Polynomial scale(const Polynomial& p, const Rational& c) { return p * c; }

Polynomial partial(const Polynomial& p, Var v) {
    if (!v.is_time() && (v.axis() < 0 || v.axis() >= p.spatial_dim()))
        throw InvalidArgument("invalid variable index " + std::to_string(v.axis()) + " for n = " +
                              std::to_string(p.spatial_dim()));
    Polynomial r(p.spatial_dim());
    for (const auto& [e, c] : p.terms()) {
        unsigned power = v.is_time() ? e.t_exp : e.space[v.axis()];
        if (power == 0) continue;
        ExponentVector d = e;
        if (v.is_time())
            d.t_exp -= 1;
        else
            d.space[v.axis()] -= 1;
        r.add_term(d, c * power);
    }
    return r;
}

Polynomial laplacian(const Polynomial& p) {
    Polynomial r(p.spatial_dim());
    for (int i = 0; i < p.spatial_dim(); ++i) r += partial(partial(p, Var::x(i)), Var::x(i));
    return r;
}

Polynomial heat_apply(const Polynomial& p) { return partial(p, Var::t()) - laplacian(p); }

unsigned parabolic_degree(const Polynomial& p) {
    if (p.is_zero()) throw ZeroPolynomial();
    const unsigned d = p.terms().begin()->first.parabolic_weight();
    for (const auto& [e, c] : p.terms())
        if (e.parabolic_weight() != d)
            throw NotHomogeneous(static_cast<int>(d), static_cast<int>(e.parabolic_weight()));
    return d;
}

namespace {

template <typename T>
std::vector<std::vector<T>> power_table(const Polynomial& p, std::span<const T> pt) {
    // powers[v][e] = pt[v]^e for v over (x_1..x_n, t)
    const int n = p.spatial_dim();
    std::vector<unsigned> max_exp(n + 1, 0);
    for (const auto& [e, c] : p.terms()) {
        for (int i = 0; i < n; ++i) max_exp[i] = std::max(max_exp[i], e.space[i]);
        max_exp[n] = std::max(max_exp[n], e.t_exp);
    }
    std::vector<std::vector<T>> powers(n + 1);
    for (int v = 0; v <= n; ++v) {
        powers[v].reserve(max_exp[v] + 1);
        powers[v].push_back(T(1));
        for (unsigned k = 1; k <= max_exp[v]; ++k) powers[v].push_back(powers[v].back() * pt[v]);
    }
    return powers;
}

}  // namespace

Rational evaluate(const Polynomial& p, const RationalPoint& pt) {
    const int n = p.spatial_dim();
    if (static_cast<int>(pt.coords.size()) != n + 1)
        throw DimensionMismatch("point has " + std::to_string(pt.coords.size()) + " coordinates, expected " +
                                std::to_string(n + 1));
    const auto powers = power_table<Rational>(p, std::span<const Rational>(pt.coords));
    Rational sum(0);
    for (const auto& [e, c] : p.terms()) {
        Rational term = c * powers[n][e.t_exp];
        for (int i = 0; i < n; ++i)
            if (e.space[i] != 0) term *= powers[i][e.space[i]];
        sum += term;
    }
    return sum;
}

double evaluate_float(const Polynomial& p, std::span<const double> pt) {
    const int n = p.spatial_dim();
    if (static_cast<int>(pt.size()) != n + 1)
        throw DimensionMismatch("point has " + std::to_string(pt.size()) + " coordinates, expected " +
                                std::to_string(n + 1));
    const auto powers = power_table<double>(p, pt);
    // Terms are grouped by power of t (canonical order), so accumulate each group before scaling.
    double total = 0.0;
    auto it = p.terms().begin();
    while (it != p.terms().end()) {
        const unsigned k = it->first.t_exp;
        double group = 0.0;
        for (; it != p.terms().end() && it->first.t_exp == k; ++it) {
            double term = it->second.get_d();
            for (int i = 0; i < n; ++i)
                if (it->first.space[i] != 0) term *= powers[i][it->first.space[i]];
            group += term;
        }
        total += group * powers[n][k];
    }
    return total;
}

Polynomial compose(const Polynomial& p, std::span<const Polynomial> x_images, const Polynomial& t_image) {
    const int n = p.spatial_dim();
    if (static_cast<int>(x_images.size()) != n)
        throw DimensionMismatch("compose needs one image per spatial variable");
    const int m = t_image.spatial_dim();
    for (const auto& img : x_images) require_same_dim(img, t_image);

    std::vector<std::vector<Polynomial>> powers(n + 1);
    auto power_of = [&](int v, unsigned e) -> const Polynomial& {
        const Polynomial& base = v == n ? t_image : x_images[v];
        auto& cache = powers[v];
        if (cache.empty()) cache.push_back(Polynomial::constant(m, Rational(1)));
        while (cache.size() <= e) cache.push_back(cache.back() * base);
        return cache[e];
    };

    Polynomial r(m);
    for (const auto& [e, c] : p.terms()) {
        Polynomial term = power_of(n, e.t_exp) * c;
        for (int i = 0; i < n; ++i)
            if (e.space[i] != 0) term = term * power_of(i, e.space[i]);
        r += term;
    }
    return r;
}

namespace {

std::vector<Polynomial> identity_images(int n) {
    std::vector<Polynomial> images;
    images.reserve(n);
    for (int i = 0; i < n; ++i) images.push_back(Polynomial::variable(n, Var::x(i)));
    return images;
}

void check_axis(int axis, int n) {
    if (axis < 0 || axis >= n)
        throw InvalidArgument("invalid axis " + std::to_string(axis) + " for n = " + std::to_string(n));
}

}  // namespace

Polynomial rotate_xy(const Polynomial& p, int i, int j, const Rational& c, const Rational& s) {
    const int n = p.spatial_dim();
    check_axis(i, n);
    check_axis(j, n);
    if (i == j) throw InvalidArgument("rotation axes must differ");
    if (c * c + s * s != 1)
        throw NotOnUnitCircle("(" + to_string(c) + ", " + to_string(s) + ") is not on the unit circle");
    auto images = identity_images(n);
    const Polynomial xi = Polynomial::variable(n, Var::x(i));
    const Polynomial xj = Polynomial::variable(n, Var::x(j));
    images[i] = c * xi - s * xj;
    images[j] = s * xi + c * xj;
    return compose(p, images, Polynomial::variable(n, Var::t()));
}

Polynomial embed(const Polynomial& p, int target_dim, std::span<const int> axis_map) {
    if (static_cast<int>(axis_map.size()) != p.spatial_dim())
        throw DimensionMismatch("axis map must list one target axis per spatial variable");
    Polynomial r(target_dim);
    for (const auto& [e, c] : p.terms()) {
        ExponentVector f(e.t_exp, std::vector<unsigned>(target_dim, 0));
        for (int i = 0; i < p.spatial_dim(); ++i) {
            check_axis(axis_map[i], target_dim);
            f.space[axis_map[i]] += e.space[i];
        }
        r.add_term(f, c);
    }
    return r;
}

Polynomial substitute_time(const Polynomial& p, const Rational& value) {
    Polynomial r(p.spatial_dim());
    for (const auto& [e, c] : p.terms()) {
        Rational v;
        mpz_pow_ui(v.get_num_mpz_t(), value.get_num_mpz_t(), e.t_exp);
        mpz_pow_ui(v.get_den_mpz_t(), value.get_den_mpz_t(), e.t_exp);
        r.add_term(ExponentVector(0, e.space), c * v);
    }
    return r;
}

Polynomial scale_axis(const Polynomial& p, int axis, const Rational& factor) {
    check_axis(axis, p.spatial_dim());
    Polynomial r(p.spatial_dim());
    for (const auto& [e, c] : p.terms()) {
        Rational v;
        mpz_pow_ui(v.get_num_mpz_t(), factor.get_num_mpz_t(), e.space[axis]);
        mpz_pow_ui(v.get_den_mpz_t(), factor.get_den_mpz_t(), e.space[axis]);
        r.add_term(e, c * v);
    }
    return r;
}

std::vector<Polynomial> t_coefficients(const Polynomial& p) {
    if (p.is_zero()) return {};
    const unsigned m = p.max_t_exponent();
    std::vector<Polynomial> coeffs(m + 1, Polynomial(p.spatial_dim()));
    for (const auto& [e, c] : p.terms()) coeffs[m - e.t_exp].add_term(ExponentVector(0, e.space), c);
    return coeffs;
}

Polynomial from_t_coefficients(std::span<const Polynomial> coeffs, int spatial_dim) {
    Polynomial r(spatial_dim);
    const std::size_t m = coeffs.empty() ? 0 : coeffs.size() - 1;
    for (std::size_t idx = 0; idx < coeffs.size(); ++idx) {
        require_same_dim(coeffs[idx], r);
        for (const auto& [e, c] : coeffs[idx].terms())
            r.add_term(ExponentVector(e.t_exp + static_cast<unsigned>(m - idx), e.space), c);
    }
    return r;
}

Rational clear_denominators(Polynomial& p) {
    if (p.is_zero()) return Rational(1);
    BigInt l = 1, g = 0;
    for (const auto& [e, c] : p.terms()) {
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_num_mpz_t());
    }
    Rational factor(l, g);
    factor.canonicalize();
    p *= factor;
    return factor;
}

}  // namespace calorics
