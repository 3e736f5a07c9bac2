#pragma once

#include <optional>
#include <string>
#include <vector>

#include "calorics/polynomial.hpp"

namespace calorics {

/// Outcome of an exact identity check; `detail` explains the first failure.
struct CheckResult {
    bool ok = true;
    std::string detail;

    explicit operator bool() const { return ok; }

    static CheckResult pass() { return {}; }
    static CheckResult fail(std::string why) { return {false, std::move(why)}; }
};

struct MultiIndex {
    std::vector<unsigned> entries;

    unsigned total() const;
    bool operator==(const MultiIndex&) const = default;
};

/// All multi-indices of length n and total d, in increasing lexicographic order.
std::vector<MultiIndex> multi_indices(int n, unsigned d);

/// Physicists' Hermite polynomial H_d as a polynomial in x (n = 1, no t).
Polynomial hermite(unsigned d);

/// The basic hcp p_d(x, t) in one space variable, normalized so its leading term is t^k or t^k x.
Polynomial basic_hcp(unsigned d);

/// p_d(x, -1) == (floor(d/2)! / d!) H_d(x/2), compared coefficientwise.
CheckResult hermite_relation_check(unsigned d);

/// p_alpha = prod_i p_{alpha_i}(x_i, t) in n = alpha.size() space variables.
Polynomial product_hcp(const MultiIndex& alpha);

/// {p_alpha : |alpha| = d}, ordered as multi_indices(n, d).
std::vector<Polynomial> basis(int n, unsigned d);

enum class CaloricStatus { caloric, not_caloric, not_homogeneous, zero };

struct CaloricCheck {
    CaloricStatus status = CaloricStatus::zero;
    std::optional<unsigned> degree;
    std::string detail;

    bool ok() const { return status == CaloricStatus::caloric; }
};

CaloricCheck is_caloric(const Polynomial& p);

std::string to_string(CaloricStatus s);

struct ChainLevel {
    /// Index j of the relation (m - j) p_{m-j} = Laplacian(p_{m-j-1}); -1 stands for Laplacian(p_m) = 0.
    int level = -1;
    bool ok = true;
};

struct ChainReport {
    bool ok = true;
    unsigned m = 0;
    std::vector<ChainLevel> levels;
    std::optional<int> first_failure;
};

/// Verifies the coefficient relations of p = sum_j t^j p_j(x) level by level.
ChainReport chain_check(const Polynomial& p);

/// Checks Laplacian(v) - (1/2) x . grad(v) + (d/2) v == 0 for v(x) = p(x, -1).
/// Requires is_caloric(p); throws InvalidArgument otherwise.
CheckResult eigen_check(const Polynomial& p);

/// Factorization of p_d into nested parabolas t + a_i x^2.
struct ParabolaFactors {
    unsigned degree = 0;
    bool leading_x = false;
    /// Strictly increasing, all positive, floor(d/2) entries.
    std::vector<double> coefficients;
    /// Max abs difference between the expanded product and basic_hcp(d).
    double reconstruction_error = 0.0;
};

/// Positive roots of H_d, ascending, from the Jacobi matrix and Newton-polished on H_d.
std::vector<double> hermite_positive_roots(unsigned d);

/// Throws ConvergenceError when Newton polishing stalls or the reconstruction misses `tolerance`.
ParabolaFactors parabola_factors(unsigned d, double tolerance);

/// Interlacing of the parabola coefficients of p_{d-1} and p_d (d >= 3), each gap wider than `tol`.
CheckResult interlacing_check(unsigned d, double tol);

/// rational_part * pi^(pi_half_power / 2)
struct WeightedInnerProduct {
    Rational rational_part;
    int pi_half_power = 0;

    double value() const;
};

/// Exact closed form of the 1-D moment integral of x^e against exp(-x^2/4), divided by sqrt(pi).
Rational gaussian_moment(unsigned e);

/// Integral over R^n of p(x,-1) q(x,-1) exp(-|x|^2/4).
WeightedInnerProduct weighted_inner_product(const Polynomial& p, const Polynomial& q);

}  // namespace calorics
