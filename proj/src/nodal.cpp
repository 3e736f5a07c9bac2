#include "calorics/nodal.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <ostream>
#include <thread>
#include <unordered_map>

#include "calorics/caloric.hpp"
#include "calorics/errors.hpp"

namespace calorics {

namespace {

constexpr double kZeroFractionLimit = 1e-3;

class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n) {
        for (std::size_t i = 0; i < n; ++i) parent_[i] = static_cast<std::uint32_t>(i);
    }

    std::uint32_t find(std::uint32_t a) {
        while (parent_[a] != a) {
            parent_[a] = parent_[parent_[a]];
            a = parent_[a];
        }
        return a;
    }

    void unite(std::uint32_t a, std::uint32_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        // Smaller index becomes the root, independent of visiting order.
        if (a < b)
            parent_[b] = a;
        else
            parent_[a] = b;
    }

private:
    std::vector<std::uint32_t> parent_;
};

int bit_length(const BigInt& v) { return v == 0 ? 0 : static_cast<int>(mpz_sizeinbase(v.get_mpz_t(), 2)); }

int bit_length(std::int64_t v) {
    int bits = 0;
    for (std::uint64_t u = static_cast<std::uint64_t>(v < 0 ? -v : v); u != 0; u >>= 1) ++bits;
    return bits;
}

template <typename Fn>
void parallel_for(std::size_t count, Fn&& fn) {
    const unsigned threads = std::min<unsigned>(evaluation_threads(), static_cast<unsigned>(std::max<std::size_t>(1, count / 4096)));
    if (threads <= 1) {
        fn(std::size_t{0}, count);
        return;
    }
    std::vector<std::thread> pool;
    const std::size_t chunk = (count + threads - 1) / threads;
    for (unsigned w = 0; w < threads; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(count, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&fn, begin, end] { fn(begin, end); });
    }
    for (auto& th : pool) th.join();
}

struct Tally {
    int positive = 0;
    int negative = 0;
};

// Labels same-sign components of `signs` given an adjacency enumerator; a same-sign pair
// merges only if `zero_free(a, b)` holds.
template <typename ForEachPair, typename ZeroFree>
Tally label_components(std::span<const std::int8_t> signs, ForEachPair&& for_each_pair, UnionFind& uf,
                       ZeroFree&& zero_free) {
    for_each_pair([&](std::size_t a, std::size_t b) {
        if (signs[a] == 0 || signs[a] != signs[b]) return;
        if (!zero_free(a, b)) return;
        uf.unite(static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b));
    });
    Tally tally;
    for (std::size_t i = 0; i < signs.size(); ++i) {
        if (signs[i] == 0 || uf.find(static_cast<std::uint32_t>(i)) != i) continue;
        if (signs[i] > 0)
            ++tally.positive;
        else
            ++tally.negative;
    }
    return tally;
}

// Sign of every Bernstein coefficient, or 0 when they are mixed or some vanish.
int common_sign(const std::vector<BigInt>& b) {
    const int first = sgn(b.front());
    if (first == 0) return 0;
    for (const auto& v : b)
        if (sgn(v) != first) return 0;
    return first;
}

bool bernstein_has_zero(const std::vector<BigInt>& b, int depth) {
    if (sgn(b.front()) == 0 || sgn(b.back()) == 0) return true;
    if (sgn(b.front()) != sgn(b.back())) return true;
    if (common_sign(b) != 0) return false;
    if (depth == 0) return true;
    // de Casteljau at 1/2 with sums instead of averages, rescaled to a common 2^deg.
    const std::size_t deg = b.size() - 1;
    std::vector<BigInt> row = b, left(deg + 1), right(deg + 1);
    for (std::size_t r = 0; r <= deg; ++r) {
        left[r] = row[0] << static_cast<mp_bitcnt_t>(deg - r);
        right[deg - r] = row[deg - r] << static_cast<mp_bitcnt_t>(r);
        for (std::size_t k = 0; k + r < deg; ++k) row[k] += row[k + 1];
    }
    return bernstein_has_zero(left, depth - 1) || bernstein_has_zero(right, depth - 1);
}

}  // namespace

// ---------------------------------------------------------------------------
// CrossSectionGrid

CrossSectionGrid::CrossSectionGrid(int ambient_dim, int resolution, bool jittered)
    : m_(ambient_dim), res_(resolution), jittered_(jittered) {
    if (ambient_dim < 2 || ambient_dim > 4) throw InvalidArgument("cube cross-section supports ambient dimension 2..4");
    if (resolution < 1) throw InvalidArgument("resolution must be positive");
    cells_per_face_ = 1;
    for (int k = 0; k < m_ - 1; ++k) cells_per_face_ *= static_cast<std::size_t>(res_);
    if (size() >= (std::size_t{1} << 32)) throw InvalidArgument("cross-section grid too large");
    // Center (2i + 1 - res)/res, shifted by (a + 1)/(6 res m) when jittered.
    den_ = 6LL * res_ * m_;
}

std::int64_t CrossSectionGrid::free_numerator(int axis, int i) const {
    const std::int64_t base = 6LL * m_ * (2LL * i + 1 - res_);
    return jittered_ ? base + (axis + 1) : base;
}

void CrossSectionGrid::center_numerators(std::size_t cell, std::span<std::int64_t> out) const {
    const int face = static_cast<int>(cell / cells_per_face_);
    std::size_t rem = cell % cells_per_face_;
    const int fixed = face / 2;
    for (int a = 0; a < m_; ++a) {
        if (a == fixed) {
            out[a] = face % 2 == 0 ? -den_ : den_;
        } else {
            out[a] = free_numerator(a, static_cast<int>(rem % res_));
            rem /= res_;
        }
    }
    const std::int64_t s = out[m_ - 1];
    out[m_ - 1] = s < 0 ? -s * s : s * s;
}

// ---------------------------------------------------------------------------
// SignEvaluator

SignEvaluator::SignEvaluator(const Polynomial& p, std::int64_t denominator, std::vector<int> denominator_powers)
    : vars_(p.spatial_dim() + 1) {
    if (denominator < 1) throw InvalidArgument("denominator must be positive");
    if (denominator_powers.empty()) denominator_powers.assign(vars_, 1);
    if (static_cast<int>(denominator_powers.size()) != vars_)
        throw DimensionMismatch("one denominator power per coordinate expected");
    for (int pw : denominator_powers) {
        if (pw < 1 || pw > 2) throw InvalidArgument("denominator powers must be 1 or 2");
        extents_.push_back(pw == 1 ? denominator : denominator * denominator);
    }
    Polynomial integral = p;
    clear_denominators(integral);
    // Term weight: D-exponent of its monomial's denominator; multiply through by D^max.
    auto weight_of = [&](const ExponentVector& e) {
        unsigned w = 0;
        for (int k = 0; k < vars_ - 1; ++k) w += e.space[k] * denominator_powers[k];
        return w + e.t_exp * denominator_powers[vars_ - 1];
    };
    unsigned wmax = 0;
    for (const auto& [e, c] : integral.terms()) wmax = std::max(wmax, weight_of(e));
    const BigInt den(static_cast<long>(denominator));
    BigInt total_abs = 0;
    for (const auto& [e, c] : integral.terms()) {
        Term term;
        term.exps = e.space;
        term.exps.push_back(e.t_exp);
        BigInt scale_pow;
        mpz_pow_ui(scale_pow.get_mpz_t(), den.get_mpz_t(), wmax - weight_of(e));
        term.weight = c.get_num() * scale_pow;
        term.weight_d = term.weight.get_d();
        for (unsigned e : term.exps) max_exp_ = std::max(max_exp_, e);
        total_abs += abs(term.weight);
        terms_.push_back(std::move(term));
    }
    fixed_width_ = bit_length(total_abs) + static_cast<int>(wmax) * bit_length(denominator) + 1 < 126;
    if (fixed_width_) {
        for (auto& term : terms_) {
            // Split into two 64-bit halves; the magnitude fits by the bound above.
            const BigInt mag = abs(term.weight);
            const BigInt high = mag >> 64;
            const BigInt low = mag - (high << 64);
            unsigned __int128 v = static_cast<unsigned __int128>(mpz_get_ui(high.get_mpz_t())) << 64;
            v |= mpz_get_ui(low.get_mpz_t());
            term.weight128 = term.weight < 0 ? -static_cast<__int128>(v) : static_cast<__int128>(v);
        }
    }
}

int SignEvaluator::sign(std::span<const std::int64_t> numerators) const {
    if (fixed_width_) {
        __int128 sum = 0;
        for (const auto& term : terms_) {
            __int128 v = term.weight128;
            for (int k = 0; k < vars_; ++k)
                for (unsigned e = 0; e < term.exps[k]; ++e) v *= numerators[k];
            sum += v;
        }
        return (sum > 0) - (sum < 0);
    }
    BigInt sum = 0, v;
    for (const auto& term : terms_) {
        v = term.weight;
        for (int k = 0; k < vars_; ++k) {
            if (term.exps[k] == 0) continue;
            BigInt pw;
            mpz_set_si(pw.get_mpz_t(), numerators[k]);
            mpz_pow_ui(pw.get_mpz_t(), pw.get_mpz_t(), term.exps[k]);
            v *= pw;
        }
        sum += v;
    }
    return sgn(sum);
}

// Floating Bernstein coefficients with a generous forward error bound; true only when every
// coefficient is certainly nonzero with one common sign.
bool SignEvaluator::segment_certainly_zero_free(std::span<const std::int64_t> start, int axis,
                                                std::int64_t delta) const {
    constexpr int max_deg = 32;
    constexpr int max_vars = 8;
    if (max_exp_ > max_deg || vars_ > max_vars) return false;
    double powers[max_vars][max_deg + 1];
    for (int k = 0; k < vars_; ++k) {
        powers[k][0] = 1.0;
        for (unsigned e = 1; e <= max_exp_; ++e) powers[k][e] = powers[k][e - 1] * static_cast<double>(start[k]);
    }
    double delta_pow[max_deg + 1];
    delta_pow[0] = 1.0;
    for (unsigned e = 1; e <= max_exp_; ++e) delta_pow[e] = delta_pow[e - 1] * static_cast<double>(delta);

    unsigned deg = 0;
    double a[max_deg + 1] = {}, abs_a[max_deg + 1] = {};
    for (const auto& term : terms_) {
        double base = term.weight_d;
        for (int k = 0; k < vars_; ++k)
            if (k != axis) base *= powers[k][term.exps[k]];
        const unsigned e = term.exps[axis];
        deg = std::max(deg, e);
        double binom = 1;
        for (unsigned k = 0; k <= e; ++k) {
            const double v = base * binom * powers[axis][e - k] * delta_pow[k];
            a[k] += v;
            abs_a[k] += std::fabs(v);
            binom = binom * (e - k) / (k + 1);
        }
    }
    const double rel = 64.0 * (deg + vars_ + 8) * std::numeric_limits<double>::epsilon();
    int common = 0;
    for (unsigned i = 0; i <= deg; ++i) {
        // b_i = sum_k C(i,k)/C(deg,k) a_k
        double b = 0, abs_b = 0, ratio = 1;
        for (unsigned k = 0; k <= i; ++k) {
            b += ratio * a[k];
            abs_b += ratio * abs_a[k];
            ratio = ratio * (i - k) / (deg - k);
        }
        if (!(std::fabs(b) > rel * abs_b)) return false;
        const int sgn_b = b > 0 ? 1 : -1;
        if (common != 0 && sgn_b != common) return false;
        common = sgn_b;
    }
    return true;
}

bool SignEvaluator::segment_has_zero(std::span<const std::int64_t> start, int axis, std::int64_t delta,
                                     int max_depth) const {
    if (segment_certainly_zero_free(start, axis, delta)) return false;
    unsigned deg = 0;
    for (const auto& term : terms_) deg = std::max(deg, term.exps[axis]);
    // Power-basis coefficients of s -> P(start + s delta e_axis) on s in [0, 1].
    std::vector<BigInt> a(deg + 1, 0);
    BigInt base, pw, binom;
    for (const auto& term : terms_) {
        base = term.weight;
        for (int k = 0; k < vars_; ++k) {
            if (k == axis || term.exps[k] == 0) continue;
            mpz_set_si(pw.get_mpz_t(), start[k]);
            mpz_pow_ui(pw.get_mpz_t(), pw.get_mpz_t(), term.exps[k]);
            base *= pw;
        }
        const unsigned e = term.exps[axis];
        for (unsigned k = 0; k <= e; ++k) {
            mpz_bin_uiui(binom.get_mpz_t(), e, k);
            BigInt v = base * binom;
            mpz_set_si(pw.get_mpz_t(), start[axis]);
            mpz_pow_ui(pw.get_mpz_t(), pw.get_mpz_t(), e - k);
            v *= pw;
            mpz_set_si(pw.get_mpz_t(), delta);
            mpz_pow_ui(pw.get_mpz_t(), pw.get_mpz_t(), k);
            a[k] += v * pw;
        }
    }
    // Bernstein coefficients times deg!: sum_k C(i,k) k! (deg-k)! a_k.
    std::vector<BigInt> b(deg + 1, 0);
    for (unsigned i = 0; i <= deg; ++i) {
        for (unsigned k = 0; k <= i; ++k) {
            mpz_bin_uiui(binom.get_mpz_t(), i, k);
            b[i] += binom * factorial(k) * factorial(deg - k) * a[k];
        }
    }
    return bernstein_has_zero(b, max_depth);
}

bool SignEvaluator::path_has_zero(std::span<const std::int64_t> a, std::span<const std::int64_t> b) const {
    std::vector<std::int64_t> cur(a.begin(), a.end());
    for (int pass = 0; pass < 2; ++pass) {
        for (int k = 0; k < vars_; ++k) {
            const bool on_face = b[k] == extents_[k] || b[k] == -extents_[k];
            if (on_face != (pass == 0) || cur[k] == b[k]) continue;
            if (segment_has_zero(cur, k, b[k] - cur[k])) return true;
            cur[k] = b[k];
        }
    }
    return false;
}

// ---------------------------------------------------------------------------
// Sampling and counting

unsigned evaluation_threads() {
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("CALORICS_THREADS")) {
        const long cap = std::strtol(env, nullptr, 10);
        if (cap >= 1) n = std::min(n, static_cast<unsigned>(cap));
    }
    return n;
}

namespace {

SignField sample_grid(const Polynomial& p, CrossSectionGrid grid) {
    std::vector<int> powers(grid.ambient_dim(), 1);
    powers.back() = 2;
    auto evaluator = std::make_shared<const SignEvaluator>(p, grid.denominator(), powers);
    const SignEvaluator& eval = *evaluator;
    SignField field{grid, std::vector<std::int8_t>(grid.size(), 0), 0, evaluator};
    const int m = grid.ambient_dim();
    parallel_for(grid.size(), [&](std::size_t begin, std::size_t end) {
        std::vector<std::int64_t> pt(m);
        for (std::size_t cell = begin; cell < end; ++cell) {
            field.grid.center_numerators(cell, pt);
            field.signs[cell] = static_cast<std::int8_t>(eval.sign(pt));
        }
    });
    field.zero_cells = static_cast<std::size_t>(std::count(field.signs.begin(), field.signs.end(), 0));
    return field;
}

}  // namespace

SignField cube_section_sample(const Polynomial& p, int resolution) {
    parabolic_degree(p);
    const int m = p.spatial_dim() + 1;
    SignField field = sample_grid(p, CrossSectionGrid(m, resolution, false));
    if (field.zero_fraction() > kZeroFractionLimit) field = sample_grid(p, CrossSectionGrid(m, resolution, true));
    return field;
}

ComponentReport count_components(const SignField& field) {
    UnionFind uf(field.signs.size());
    const int m = field.grid.ambient_dim();
    std::vector<std::int64_t> pa(m), pb(m);
    auto zero_free = [&](std::size_t a, std::size_t b) {
        if (!field.evaluator) return true;
        field.grid.center_numerators(a, pa);
        field.grid.center_numerators(b, pb);
        return !field.evaluator->path_has_zero(pa, pb);
    };
    const Tally tally = label_components(
        field.signs, [&](auto&& visit) { field.grid.for_each_adjacent_pair(visit); }, uf, zero_free);
    ComponentReport r;
    r.positive = tally.positive;
    r.negative = tally.negative;
    r.total = tally.positive + tally.negative;
    r.resolutions_used = {field.grid.resolution()};
    r.stable = false;
    r.zero_cell_fraction = field.zero_fraction();
    return r;
}

std::vector<int> default_schedule(int ambient_dim, unsigned degree) {
    int top = 0;
    switch (ambient_dim) {
        case 2: return {256, 512, 1024};
        case 3: top = std::max(128, 32 * static_cast<int>(degree)); break;
        case 4: top = std::max(48, 12 * static_cast<int>(degree)); break;
        default: throw InvalidArgument("no counting schedule for ambient dimension " + std::to_string(ambient_dim));
    }
    top = (top + 3) / 4 * 4;
    return {top / 2, 3 * top / 4, top};
}

ComponentReport nodal_count(const Polynomial& p, std::span<const int> schedule) {
    if (schedule.size() < 3) throw InvalidArgument("schedule needs at least three resolutions");
    for (std::size_t i = 1; i < schedule.size(); ++i)
        if (schedule[i] <= schedule[i - 1]) throw InvalidArgument("schedule must be strictly increasing");
    std::vector<ComponentReport> runs;
    for (int res : schedule) runs.push_back(count_components(cube_section_sample(p, res)));
    ComponentReport r = runs.back();
    r.resolutions_used.assign(schedule.begin(), schedule.end());
    const std::size_t k = runs.size();
    r.stable = true;
    for (std::size_t i = k - 3; i < k; ++i)
        if (runs[i].positive != r.positive || runs[i].negative != r.negative) r.stable = false;
    return r;
}

ComponentReport nodal_count(const Polynomial& p) {
    const auto schedule = default_schedule(p.spatial_dim() + 1, parabolic_degree(p));
    return nodal_count(p, schedule);
}

nlohmann::json to_json(const ComponentReport& r) {
    return {{"total", r.total},           {"pos", r.positive},
            {"neg", r.negative},          {"resolutions", r.resolutions_used},
            {"stable", r.stable},         {"zero_frac", r.zero_cell_fraction},
            {"method", "cube-exact"}};
}

ComponentReport component_report_from_json(const nlohmann::json& j) {
    ComponentReport r;
    r.total = j.at("total").get<int>();
    r.positive = j.at("pos").get<int>();
    r.negative = j.at("neg").get<int>();
    r.resolutions_used = j.at("resolutions").get<std::vector<int>>();
    r.stable = j.at("stable").get<bool>();
    r.zero_cell_fraction = j.at("zero_frac").get<double>();
    return r;
}

// ---------------------------------------------------------------------------
// Negative-time slice

double default_slice_half_width(const Polynomial& p) {
    const unsigned d = parabolic_degree(p);
    if (d < 2) return 2.0;
    const auto factors = parabola_factors(d, 1e-6).coefficients;
    return 2.0 * (1.0 + 1.0 / std::sqrt(factors.front()));
}

int default_slice_resolution(int spatial_dim) {
    switch (spatial_dim) {
        case 1: return 4096;
        case 2: return 512;
        default: return 96;
    }
}

SliceReport slice_count(const Polynomial& p, double half_width, int resolution, std::optional<int> nodal_total) {
    if (!(half_width > 0)) throw InvalidArgument("slice box half-width must be positive");
    if (resolution < 1) throw InvalidArgument("resolution must be positive");
    const int n = p.spatial_dim();
    std::size_t cells = 1;
    for (int k = 0; k < n; ++k) cells *= static_cast<std::size_t>(resolution);
    if (cells >= (std::size_t{1} << 32)) throw InvalidArgument("slice grid too large");

    // q(y) = p(R y, -1) on [-1,1]^n, centers (2i + 1 - res)/res (+ (a+1)/(6 res n) when jittered).
    Polynomial q = substitute_time(p, Rational(-1));
    const Rational radius = rational_from_double(half_width);
    for (int a = 0; a < n; ++a) q = scale_axis(q, a, radius);
    const std::int64_t den = 6LL * resolution * n;
    const SignEvaluator eval(q, den);

    bool jittered = false;
    auto center = [&](std::size_t cell, std::vector<std::int64_t>& pt) {
        std::size_t rem = cell;
        for (int a = 0; a < n; ++a) {
            const int i = static_cast<int>(rem % resolution);
            rem /= resolution;
            pt[a] = 6LL * n * (2LL * i + 1 - resolution) + (jittered ? a + 1 : 0);
        }
    };
    auto sample = [&] {
        std::vector<std::int8_t> signs(cells, 0);
        parallel_for(cells, [&](std::size_t begin, std::size_t end) {
            std::vector<std::int64_t> pt(n + 1, 0);
            for (std::size_t cell = begin; cell < end; ++cell) {
                center(cell, pt);
                signs[cell] = static_cast<std::int8_t>(eval.sign(pt));
            }
        });
        return signs;
    };
    auto signs = sample();
    if (double(std::count(signs.begin(), signs.end(), 0)) / double(cells) > kZeroFractionLimit) {
        jittered = true;
        signs = sample();
    }

    auto for_each_pair = [&](auto&& visit) {
        std::size_t stride = 1;
        for (int a = 0; a < n; ++a) {
            for (std::size_t cell = 0; cell < cells; ++cell)
                if ((cell / stride) % resolution + 1 < static_cast<std::size_t>(resolution)) visit(cell, cell + stride);
            stride *= resolution;
        }
    };
    UnionFind uf(cells);
    std::vector<std::int64_t> pa(n + 1, 0), pb(n + 1, 0);
    auto zero_free = [&](std::size_t a, std::size_t b) {
        center(a, pa);
        center(b, pb);
        return !eval.path_has_zero(pa, pb);
    };
    const Tally tally = label_components(signs, for_each_pair, uf, zero_free);

    SliceReport r;
    r.positive = tally.positive;
    r.negative = tally.negative;
    r.count = tally.positive + tally.negative;
    r.box_half_width = half_width;
    r.resolution = resolution;
    if (n >= 2) {
        // Distinct same-sign components touching the box boundary may join outside it.
        std::unordered_map<std::uint32_t, int> boundary_roots;
        int same_sign_pairs[2] = {0, 0};
        for (std::size_t cell = 0; cell < cells; ++cell) {
            if (signs[cell] == 0) continue;
            bool on_boundary = false;
            std::size_t rem = cell;
            for (int a = 0; a < n; ++a) {
                const auto i = rem % resolution;
                rem /= resolution;
                if (i == 0 || i + 1 == static_cast<std::size_t>(resolution)) on_boundary = true;
            }
            if (!on_boundary) continue;
            const auto root = uf.find(static_cast<std::uint32_t>(cell));
            if (boundary_roots.emplace(root, signs[cell]).second) ++same_sign_pairs[signs[cell] > 0 ? 1 : 0];
        }
        r.caveat = same_sign_pairs[0] > 1 || same_sign_pairs[1] > 1;
    }
    if (nodal_total) r.bound_holds = *nodal_total <= r.count;
    return r;
}

nlohmann::json to_json(const SliceReport& r) {
    nlohmann::json j{{"count", r.count},          {"pos", r.positive},        {"neg", r.negative},
                     {"R", r.box_half_width},      {"resolution", r.resolution}, {"caveat", r.caveat}};
    if (r.bound_holds) j["bound_holds"] = *r.bound_holds;
    return j;
}

// ---------------------------------------------------------------------------
// Polar chambers

PolarChamberReport polar_chambers(const Polynomial& p, Pole pole, double rho, int samples) {
    if (p.spatial_dim() != 2) throw DimensionMismatch("polar_chambers needs n = 2");
    if (!(rho > 0 && rho < 1)) throw InvalidArgument("rho must lie in (0, 1)");
    const unsigned d = p.algebraic_degree();
    if (samples < static_cast<int>(8 * std::max(1u, d)))
        throw InvalidArgument("polar_chambers needs at least 8 d samples");
    constexpr double guard = 1e-12;
    const double t = (pole == Pole::north ? 1.0 : -1.0) * std::sqrt(1.0 - rho * rho);
    const double step = 2 * std::numbers::pi / samples;
    auto value_at = [&](double theta) {
        const double pt[] = {rho * std::cos(theta), rho * std::sin(theta), t};
        return evaluate_float(p, pt);
    };

    std::vector<int> signs(samples);
    for (int k = 0; k < samples; ++k) {
        const double theta = step * (k + 0.5);
        double v = value_at(theta);
        // Move towards alternating neighbours, halving the offset each time.
        double offset = step / 2;
        for (int iter = 0; std::fabs(v) < guard && iter < 40; ++iter) {
            v = value_at(theta + (iter % 2 == 0 ? offset : -offset));
            if (iter % 2 == 1) offset /= 2;
        }
        if (std::fabs(v) < guard)
            throw UnresolvedSign("sign unresolved near angle " + std::to_string(theta) + " after 40 refinements");
        signs[k] = v > 0 ? 1 : -1;
    }
    PolarChamberReport r;
    r.pole = pole;
    r.rho = rho;
    r.samples = samples;
    for (int k = 0; k < samples; ++k)
        if (signs[k] != signs[(k + 1) % samples]) ++r.sign_changes;
    r.n_plus = r.sign_changes == 0 ? (signs[0] > 0 ? 1 : 0) : r.sign_changes / 2;
    return r;
}

nlohmann::json to_json(const PolarChamberReport& r) {
    return {{"pole", r.pole == Pole::north ? "north" : "south"},
            {"rho", r.rho},
            {"samples", r.samples},
            {"sign_changes", r.sign_changes},
            {"n_plus", r.n_plus}};
}

// ---------------------------------------------------------------------------
// Point cloud export

std::vector<Point3> export_nodal_pointcloud(const Polynomial& p, int resolution, double delta) {
    if (p.spatial_dim() != 2) throw DimensionMismatch("point cloud export needs n = 2");
    if (!(delta > 0 && delta < 1)) throw InvalidArgument("annulus width must lie in (0, 1)");
    if (resolution < 4) throw InvalidArgument("resolution must be at least 4");
    const int rows = resolution;
    const int cols = 2 * resolution;
    const double angular = std::numbers::pi / rows;
    const int shells = std::max(2, static_cast<int>(std::ceil(delta / angular)) + 1);

    std::vector<Point3> cloud;
    std::vector<Point3> pts(static_cast<std::size_t>(rows) * cols);
    std::vector<double> vals(pts.size());
    for (int s = 0; s < shells; ++s) {
        const double r = 1.0 - delta * s / (shells - 1);
        for (int i = 0; i < rows; ++i) {
            const double theta = angular * (i + 0.5);
            for (int j = 0; j < cols; ++j) {
                const double phi = 2 * std::numbers::pi * (j + 0.5) / cols;
                const Point3 pt{r * std::sin(theta) * std::cos(phi), r * std::sin(theta) * std::sin(phi),
                                r * std::cos(theta)};
                const std::size_t idx = static_cast<std::size_t>(i) * cols + j;
                pts[idx] = pt;
                vals[idx] = evaluate_float(p, pt);
            }
        }
        auto emit = [&](std::size_t a, std::size_t b) {
            const double va = vals[a], vb = vals[b];
            if (va == 0.0) {
                cloud.push_back(pts[a]);
                return;
            }
            if ((va > 0) == (vb > 0) || vb == 0.0) return;
            const double w = va / (va - vb);
            Point3 q{pts[a][0] + w * (pts[b][0] - pts[a][0]), pts[a][1] + w * (pts[b][1] - pts[a][1]),
                     pts[a][2] + w * (pts[b][2] - pts[a][2])};
            // back onto the shell from the chord
            const double norm = std::sqrt(q[0] * q[0] + q[1] * q[1] + q[2] * q[2]);
            for (double& c : q) c *= r / norm;
            cloud.push_back(q);
        };
        for (int i = 0; i < rows; ++i) {
            for (int j = 0; j < cols; ++j) {
                const std::size_t idx = static_cast<std::size_t>(i) * cols + j;
                emit(idx, static_cast<std::size_t>(i) * cols + (j + 1) % cols);
                if (i + 1 < rows) emit(idx, idx + cols);
            }
        }
    }
    return cloud;
}

void write_pointcloud_csv(std::ostream& out, std::span<const Point3> points) {
    out << "x,y,t\n";
    char buf[96];
    for (const auto& p : points) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", p[0], p[1], p[2]);
        out << buf;
    }
}

int single_linkage_clusters(std::span<const Point3> points, double gap) {
    if (points.empty()) return 0;
    if (!(gap > 0)) throw InvalidArgument("cluster gap must be positive");
    struct Key {
        long x, y, z;
        bool operator==(const Key&) const = default;
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const {
            return std::hash<long>()(k.x * 73856093L ^ k.y * 19349663L ^ k.z * 83492791L);
        }
    };
    auto key_of = [gap](const Point3& p) {
        return Key{static_cast<long>(std::floor(p[0] / gap)), static_cast<long>(std::floor(p[1] / gap)),
                   static_cast<long>(std::floor(p[2] / gap))};
    };
    std::unordered_map<Key, std::vector<std::uint32_t>, KeyHash> buckets;
    for (std::size_t i = 0; i < points.size(); ++i) buckets[key_of(points[i])].push_back(static_cast<std::uint32_t>(i));
    UnionFind uf(points.size());
    const double gap2 = gap * gap;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const Key k = key_of(points[i]);
        for (long dx = -1; dx <= 1; ++dx)
            for (long dy = -1; dy <= 1; ++dy)
                for (long dz = -1; dz <= 1; ++dz) {
                    auto it = buckets.find({k.x + dx, k.y + dy, k.z + dz});
                    if (it == buckets.end()) continue;
                    for (std::uint32_t j : it->second) {
                        if (j <= i) continue;
                        const double ex = points[i][0] - points[j][0];
                        const double ey = points[i][1] - points[j][1];
                        const double ez = points[i][2] - points[j][2];
                        if (ex * ex + ey * ey + ez * ez < gap2) uf.unite(static_cast<std::uint32_t>(i), j);
                    }
                }
    }
    int clusters = 0;
    for (std::size_t i = 0; i < points.size(); ++i)
        if (uf.find(static_cast<std::uint32_t>(i)) == i) ++clusters;
    return clusters;
}

// ---------------------------------------------------------------------------
// Bounds

BoundsReport bounds_report(int n, unsigned d, std::optional<int> counted) {
    if (n < 1) throw InvalidArgument("bounds need n >= 1");
    if (d < 2) throw InvalidArgument("bounds need d >= 2");
    BoundsReport r;
    r.n = n;
    r.d = d;
    if (n == 1)
        r.minimum = 2 * static_cast<long>((d + 1) / 2);
    else if (n == 2)
        r.minimum = d % 4 == 0 ? 3 : 2;
    else
        r.minimum = 2;
    mpz_ui_pow_ui(r.product_lower.get_mpz_t(), d / static_cast<unsigned>(n), static_cast<unsigned>(n));
    mpz_bin_uiui(r.courant_upper.get_mpz_t(), static_cast<unsigned long>(n) + d, static_cast<unsigned long>(n));
    r.counted = counted;
    if (counted) {
        if (*counted < r.minimum)
            throw BoundViolation("count " + std::to_string(*counted) + " is below the minimum " +
                                 std::to_string(r.minimum) + " for n = " + std::to_string(n) + ", d = " + std::to_string(d));
        if (BigInt(*counted) > r.courant_upper)
            throw BoundViolation("count " + std::to_string(*counted) + " exceeds C(n+d, n) = " + r.courant_upper.get_str());
    }
    return r;
}

nlohmann::json to_json(const BoundsReport& r) {
    nlohmann::json j{{"n", r.n},
                     {"d", r.d},
                     {"minimum", r.minimum},
                     {"product_lower", r.product_lower.get_str()},
                     {"courant_upper", r.courant_upper.get_str()}};
    if (r.counted) j["counted"] = *r.counted;
    return j;
}

}  // namespace calorics
