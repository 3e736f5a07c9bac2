#include "calorics/caloric.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "calorics/errors.hpp"
#include "calorics/poly_io.hpp"

namespace calorics {

unsigned MultiIndex::total() const { return std::accumulate(entries.begin(), entries.end(), 0u); }

std::vector<MultiIndex> multi_indices(int n, unsigned d) {
    if (n < 1) throw InvalidArgument("multi-index length must be at least 1");
    std::vector<MultiIndex> out;
    std::vector<unsigned> cur(n, 0);
    // Depth-first over the first n-1 entries; the last entry absorbs the remainder.
    auto rec = [&](auto&& self, int pos, unsigned remaining) -> void {
        if (pos == n - 1) {
            cur[pos] = remaining;
            out.push_back({cur});
            return;
        }
        for (unsigned v = 0; v <= remaining; ++v) {
            cur[pos] = v;
            self(self, pos + 1, remaining - v);
        }
    };
    rec(rec, 0, d);
    return out;
}

Polynomial hermite(unsigned d) {
    Polynomial h(1);
    for (unsigned j = 0; j <= d / 2; ++j) {
        Rational c = factorial(d) / (factorial(j) * factorial(d - 2 * j));
        BigInt two_pow;
        mpz_ui_pow_ui(two_pow.get_mpz_t(), 2, d - 2 * j);
        c *= two_pow;
        if (j % 2 == 1) c = -c;
        h.add_term(ExponentVector(0, {d - 2 * j}), c);
    }
    return h;
}

Polynomial basic_hcp(unsigned d) {
    const unsigned k = d / 2;
    const unsigned parity = d % 2;
    Polynomial p(1);
    for (unsigned j = 0; j <= k; ++j) {
        const Rational c = factorial(k) / (factorial(k - j) * factorial(2 * j + parity));
        p.add_term(ExponentVector(k - j, {2 * j + parity}), c);
    }
    return p;
}

CheckResult hermite_relation_check(unsigned d) {
    const Polynomial lhs = substitute_time(basic_hcp(d), Rational(-1));
    const Polynomial rhs = scale_axis(hermite(d), 0, Rational(1, 2)) * (factorial(d / 2) / factorial(d));
    const Polynomial diff = lhs - rhs;
    if (diff.is_zero()) return CheckResult::pass();
    const auto& [e, c] = *diff.terms().rbegin();
    return CheckResult::fail("coefficient of x^" + std::to_string(e.space[0]) + " differs: " +
                             to_string(lhs.coefficient(e)) + " vs " + to_string(rhs.coefficient(e)));
}

Polynomial product_hcp(const MultiIndex& alpha) {
    const int n = static_cast<int>(alpha.entries.size());
    if (n < 1) throw InvalidArgument("product_hcp needs n >= 1");
    Polynomial p = Polynomial::constant(n, Rational(1));
    for (int i = 0; i < n; ++i) {
        const int axis[] = {i};
        p = p * embed(basic_hcp(alpha.entries[i]), n, axis);
    }
    return p;
}

std::vector<Polynomial> basis(int n, unsigned d) {
    std::vector<Polynomial> out;
    for (const auto& alpha : multi_indices(n, d)) out.push_back(product_hcp(alpha));
    return out;
}

std::string to_string(CaloricStatus s) {
    switch (s) {
        case CaloricStatus::caloric: return "caloric";
        case CaloricStatus::not_caloric: return "not_caloric";
        case CaloricStatus::not_homogeneous: return "not_homogeneous";
        case CaloricStatus::zero: return "zero";
    }
    return "unknown";
}

CaloricCheck is_caloric(const Polynomial& p) {
    CaloricCheck r;
    if (p.is_zero()) {
        r.detail = "zero polynomial";
        return r;
    }
    try {
        r.degree = parabolic_degree(p);
    } catch (const NotHomogeneous& ex) {
        r.status = CaloricStatus::not_homogeneous;
        r.detail = ex.what();
        return r;
    }
    const Polynomial residual = heat_apply(p);
    if (!residual.is_zero()) {
        r.status = CaloricStatus::not_caloric;
        r.detail = "heat operator leaves " + to_string(residual);
        return r;
    }
    r.status = CaloricStatus::caloric;
    return r;
}

ChainReport chain_check(const Polynomial& p) {
    if (p.is_zero()) throw ZeroPolynomial();
    const auto coeffs = t_coefficients(p);  // coeffs[j] = p_{m-j}
    ChainReport report;
    report.m = static_cast<unsigned>(coeffs.size() - 1);
    auto record = [&](int level, bool ok) {
        report.levels.push_back({level, ok});
        if (!ok && !report.first_failure) {
            report.first_failure = level;
            report.ok = false;
        }
    };
    record(-1, laplacian(coeffs[0]).is_zero());
    for (unsigned j = 0; j < report.m; ++j) {
        const Rational mult(static_cast<long>(report.m - j));
        record(static_cast<int>(j), coeffs[j] * mult == laplacian(coeffs[j + 1]));
    }
    return report;
}

CheckResult eigen_check(const Polynomial& p) {
    const auto cal = is_caloric(p);
    if (!cal.ok()) throw InvalidArgument("eigen_check requires a caloric polynomial: " + cal.detail);
    const int n = p.spatial_dim();
    const Polynomial v = substitute_time(p, Rational(-1));
    Polynomial radial(n);
    for (int i = 0; i < n; ++i) radial += Polynomial::variable(n, Var::x(i)) * partial(v, Var::x(i));
    const Polynomial residual =
        laplacian(v) - radial * Rational(1, 2) + v * Rational(static_cast<long>(*cal.degree), 2);
    if (residual.is_zero()) return CheckResult::pass();
    return CheckResult::fail("residual " + to_string(residual));
}

namespace {

// H_d and H_{d-1} at x via the three-term recurrence.
std::pair<long double, long double> hermite_pair(unsigned d, long double x) {
    long double prev = 1.0L, cur = 2.0L * x;
    if (d == 0) return {prev, 0.0L};
    for (unsigned k = 1; k < d; ++k) {
        const long double next = 2.0L * x * cur - 2.0L * k * prev;
        prev = cur;
        cur = next;
    }
    return {cur, prev};
}

}  // namespace

std::vector<double> hermite_positive_roots(unsigned d) {
    if (d < 2) return {};
    // Monic recurrence x h_k = h_{k+1} + (k/2) h_{k-1}: symmetric tridiagonal with zero diagonal.
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(d);
    Eigen::VectorXd sub(d - 1);
    for (unsigned k = 1; k < d; ++k) sub(k - 1) = std::sqrt(static_cast<double>(k) / 2.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw ConvergenceError("Jacobi eigen-solver failed for d = " + std::to_string(d));

    std::vector<double> roots;
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
        long double x = solver.eigenvalues()(i);
        if (x <= 1e-8) continue;
        bool converged = false;
        for (int iter = 0; iter < 60; ++iter) {
            const auto [h, h_prev] = hermite_pair(d, x);
            const long double step = h / (2.0L * d * h_prev);
            x -= step;
            if (std::fabs(step) <= 1e-16L * std::max(1.0L, std::fabs(x))) {
                converged = true;
                break;
            }
        }
        if (!converged) throw ConvergenceError("Newton polishing did not converge for a root of H_" + std::to_string(d));
        roots.push_back(static_cast<double>(x));
    }
    std::sort(roots.begin(), roots.end());
    if (roots.size() != d / 2) throw ConvergenceError("expected " + std::to_string(d / 2) + " positive roots of H_" + std::to_string(d));
    return roots;
}

ParabolaFactors parabola_factors(unsigned d, double tolerance) {
    if (d < 2) throw InvalidArgument("parabola_factors requires d >= 2");
    ParabolaFactors out;
    out.degree = d;
    out.leading_x = d % 2 == 1;
    for (double r : hermite_positive_roots(d)) out.coefficients.push_back(1.0 / (4.0 * r * r));
    std::sort(out.coefficients.begin(), out.coefficients.end());

    // prod (t + a_i x^2): the coefficient of t^(k-j) x^(2j) is the j-th elementary symmetric sum.
    const unsigned k = d / 2;
    std::vector<double> elem(k + 1, 0.0);
    elem[0] = 1.0;
    for (double a : out.coefficients)
        for (unsigned j = k; j >= 1; --j) elem[j] += a * elem[j - 1];
    const Polynomial exact = basic_hcp(d);
    double err = 0.0;
    for (unsigned j = 0; j <= k; ++j) {
        const double want = exact.coefficient(ExponentVector(k - j, {2 * j + d % 2})).get_d();
        err = std::max(err, std::fabs(elem[j] - want));
    }
    out.reconstruction_error = err;
    if (!(err < tolerance))
        throw ConvergenceError("parabola factors of p_" + std::to_string(d) + " reconstruct with error " +
                               std::to_string(err));
    return out;
}

CheckResult interlacing_check(unsigned d, double tol) {
    if (d < 3) throw InvalidArgument("interlacing_check needs the consecutive pair (p_{d-1}, p_d) with d >= 3");
    // Loose reconstruction tolerance: interlacing only needs the ordering.
    const auto lower = parabola_factors(d - 1, 1e-6).coefficients;
    const auto upper = parabola_factors(d, 1e-6).coefficients;
    // Merge into the expected alternating chain, smallest first.
    std::vector<double> chain;
    if (d % 2 == 0) {
        // b_1 < a_1 < b_2 < ... < a_{k-1} < b_k  (b from p_d, a from p_{d-1})
        for (std::size_t i = 0; i < upper.size(); ++i) {
            chain.push_back(upper[i]);
            if (i < lower.size()) chain.push_back(lower[i]);
        }
    } else {
        // c_1 < b_1 < c_2 < ... < c_k < b_k  (c from p_d, b from p_{d-1})
        for (std::size_t i = 0; i < upper.size(); ++i) {
            chain.push_back(upper[i]);
            chain.push_back(lower[i]);
        }
    }
    for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
        if (!(chain[i + 1] - chain[i] > tol))
            return CheckResult::fail("interlacing of p_" + std::to_string(d - 1) + " and p_" + std::to_string(d) +
                                     " fails at position " + std::to_string(i) + ": " + std::to_string(chain[i]) +
                                     " !< " + std::to_string(chain[i + 1]));
    }
    return CheckResult::pass();
}

double WeightedInnerProduct::value() const {
    return rational_part.get_d() * std::pow(std::numbers::pi, pi_half_power / 2.0);
}

Rational gaussian_moment(unsigned e) {
    if (e % 2 == 1) return Rational(0);
    const unsigned m = e / 2;
    // 2^(m+1) (2m-1)!!
    BigInt two_pow, double_fact(1);
    mpz_ui_pow_ui(two_pow.get_mpz_t(), 2, m + 1);
    if (m > 0) mpz_2fac_ui(double_fact.get_mpz_t(), 2 * m - 1);
    return Rational(two_pow * double_fact);
}

WeightedInnerProduct weighted_inner_product(const Polynomial& p, const Polynomial& q) {
    require_same_dim(p, q);
    const int n = p.spatial_dim();
    const Polynomial integrand = substitute_time(p, Rational(-1)) * substitute_time(q, Rational(-1));
    WeightedInnerProduct out;
    out.pi_half_power = n;
    out.rational_part = 0;
    for (const auto& [e, c] : integrand.terms()) {
        Rational term = c;
        for (int i = 0; i < n && term != 0; ++i) term *= gaussian_moment(e.space[i]);
        out.rational_part += term;
    }
    return out;
}

}  // namespace calorics
