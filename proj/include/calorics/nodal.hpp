#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "calorics/polynomial.hpp"

namespace calorics {

/// Sample grid on the cross-section max(|x_1|, ..., |x_n|, |t|^(1/2)) = 1.
///
/// Every parabolic ray {(lambda x, lambda^2 t) : lambda > 0} meets it exactly once, so the sign
/// components of a parabolically homogeneous polynomial on it correspond to its nodal domains.
/// As a set it is the boundary of the cube [-1,1]^m, m = n + 1; the time axis is sampled
/// uniformly in s = sign(t) |t|^(1/2). Face f fixes axis f / 2 at -1 (f even) or +1 (f odd);
/// each face carries resolution^(m-1) cells indexed in mixed radix over the free axes in
/// increasing axis order. Space coordinates of cell centers are exact rationals over
/// `denominator()`, the time coordinate over `denominator()^2`.
class CrossSectionGrid {
public:
    CrossSectionGrid(int ambient_dim, int resolution, bool jittered = false);

    int ambient_dim() const { return m_; }
    int resolution() const { return res_; }
    bool jittered() const { return jittered_; }
    int face_count() const { return 2 * m_; }
    std::size_t cells_per_face() const { return cells_per_face_; }
    std::size_t size() const { return cells_per_face_ * static_cast<std::size_t>(2 * m_); }
    std::int64_t denominator() const { return den_; }

    std::int64_t time_denominator() const { return den_ * den_; }

    /// Integer numerators of the cell center, ordered (x_1, ..., x_n, t).
    void center_numerators(std::size_t cell, std::span<std::int64_t> out) const;
    /// Numerator of the center coordinate (s for the time axis) of cell index `i` along a free axis.
    std::int64_t free_numerator(int axis, int i) const;

    /// Calls visit(a, b) for every adjacent pair: shared faces inside a face of the
    /// cube, plus the edge-adjacent cell pairs of neighbouring faces.
    template <typename Visit>
    void for_each_adjacent_pair(Visit&& visit) const;

private:
    int m_;
    int res_;
    bool jittered_;
    std::size_t cells_per_face_;
    std::int64_t den_;
};

/// Exact sign evaluator for a fixed polynomial at rational points whose coordinate k has
/// denominator D^(denominator_powers[k]) (all 1 when omitted). Numerators must not exceed the
/// denominator of their coordinate in absolute value.
class SignEvaluator {
public:
    SignEvaluator(const Polynomial& p, std::int64_t denominator, std::vector<int> denominator_powers = {});

    /// Sign of p(numerators / denominator); numerators ordered (x_1, ..., x_n, t).
    int sign(std::span<const std::int64_t> numerators) const;
    bool uses_fixed_width() const { return fixed_width_; }

    /// Whether p vanishes on the segment from `start` to start + delta e_axis (endpoints
    /// included). Decided exactly by Bernstein subdivision; segments still undecided after
    /// `max_depth` halvings count as containing a zero.
    bool segment_has_zero(std::span<const std::int64_t> start, int axis, std::int64_t delta,
                          int max_depth = 24) const;
    /// Walks from a to b one coordinate at a time, coordinates that b holds at +-(their
    /// denominator) first.
    bool path_has_zero(std::span<const std::int64_t> a, std::span<const std::int64_t> b) const;

private:
    struct Term {
        std::vector<unsigned> exps;  // length n + 1
        BigInt weight;               // coefficient * D^(dmax - deg)
        __int128 weight128 = 0;
        double weight_d = 0;
    };
    bool segment_certainly_zero_free(std::span<const std::int64_t> start, int axis, std::int64_t delta) const;
    int vars_;
    std::vector<std::int64_t> extents_;
    unsigned max_exp_ = 0;
    bool fixed_width_;
    std::vector<Term> terms_;
};

struct SignField {
    CrossSectionGrid grid;
    std::vector<std::int8_t> signs;
    std::size_t zero_cells = 0;
    /// When set, same-sign neighbours on the sign frontier merge only along zero-free paths.
    std::shared_ptr<const SignEvaluator> evaluator;

    double zero_fraction() const { return signs.empty() ? 0.0 : double(zero_cells) / double(signs.size()); }
};

struct ComponentReport {
    int total = 0;
    int positive = 0;
    int negative = 0;
    std::vector<int> resolutions_used;
    bool stable = false;
    double zero_cell_fraction = 0.0;
};

/// {"total","pos","neg","resolutions","stable","zero_frac","method":"cube-exact"}
nlohmann::json to_json(const ComponentReport& r);
ComponentReport component_report_from_json(const nlohmann::json& j);

/// Threads used for sign evaluation; CALORICS_THREADS caps it.
unsigned evaluation_threads();

/// Exact signs at all cell centers. When more than 1e-3 of the cells are exact zeros the
/// grid is resampled with per-axis rational offsets (a + 1) / (6 res m) (in s for time).
SignField cube_section_sample(const Polynomial& p, int resolution);

/// Same-sign union-find over face-adjacent cells (including across cube edges); zero cells
/// join nothing. Pairs touching a cell of another sign are merged only when the evaluator
/// certifies that p has no zero between the two centers.
ComponentReport count_components(const SignField& field);

/// Counts at every resolution of the schedule; stable when the last three agree on
/// (positive, negative). The reported counts are the finest resolution's.
ComponentReport nodal_count(const Polynomial& p, std::span<const int> schedule);
ComponentReport nodal_count(const Polynomial& p);

/// [R/2, 3R/4, R] with R growing linearly in the parabolic degree; ambient dimension 2 uses
/// [256, 512, 1024].
std::vector<int> default_schedule(int ambient_dim, unsigned degree);

struct SliceReport {
    int count = 0;
    int positive = 0;
    int negative = 0;
    double box_half_width = 0.0;
    int resolution = 0;
    /// Set when distinct same-sign components reach the box boundary and could merge outside it.
    bool caveat = false;
    /// nodal count <= slice count, when a nodal count was supplied.
    std::optional<bool> bound_holds;
};

nlohmann::json to_json(const SliceReport& r);

/// 2 (1 + max_i a_{d,i}^(-1/2)) from the parabola factors of p_d, d the parabolic degree.
double default_slice_half_width(const Polynomial& p);
int default_slice_resolution(int spatial_dim);

/// Components of {x in [-R,R]^n : p(x,-1) != 0}, exact signs at cell centers.
SliceReport slice_count(const Polynomial& p, double half_width, int resolution,
                        std::optional<int> nodal_total = std::nullopt);

enum class Pole { north, south };

struct PolarChamberReport {
    Pole pole = Pole::north;
    double rho = 0.0;
    int samples = 0;
    int sign_changes = 0;
    int n_plus = 0;
};

nlohmann::json to_json(const PolarChamberReport& r);

/// Sign changes of p (n = 2) around the circle x^2 + y^2 = rho^2 at t = +-sqrt(1 - rho^2).
/// Samples with |p| < 1e-12 are nudged towards a neighbour by bisection, up to 40 steps;
/// an unresolved sample raises UnresolvedSign.
PolarChamberReport polar_chambers(const Polynomial& p, Pole pole, double rho, int samples);

using Point3 = std::array<double, 3>;

/// Points of the nodal set of p (n = 2) inside the shell 1 - delta <= |(x,y,t)| <= 1, found as
/// sign changes between neighbouring samples of latitude/longitude grids on concentric spheres.
std::vector<Point3> export_nodal_pointcloud(const Polynomial& p, int resolution, double delta);

/// CSV with header "x,y,t", 17 significant digits.
void write_pointcloud_csv(std::ostream& out, std::span<const Point3> points);

/// Number of clusters under single linkage: points closer than `gap` share a cluster.
int single_linkage_clusters(std::span<const Point3> points, double gap);

struct BoundsReport {
    int n = 0;
    unsigned d = 0;
    /// Minimum number of nodal domains over time-dependent hcps.
    long minimum = 0;
    /// floor(d/n)^n, attained by products of basic hcps.
    BigInt product_lower;
    /// C(n+d, n)
    BigInt courant_upper;
    std::optional<int> counted;
};

nlohmann::json to_json(const BoundsReport& r);

/// Throws BoundViolation when `counted` falls outside [minimum, courant_upper].
BoundsReport bounds_report(int n, unsigned d, std::optional<int> counted = std::nullopt);

// ---------------------------------------------------------------------------

template <typename Visit>
void CrossSectionGrid::for_each_adjacent_pair(Visit&& visit) const {
    const int free_count = m_ - 1;
    std::vector<int> idx(free_count);
    std::vector<int> free_axes(free_count);
    for (int f = 0; f < 2 * m_; ++f) {
        const int fixed = f / 2;
        const int fixed_side = f % 2;
        for (int k = 0, a = 0; a < m_; ++a)
            if (a != fixed) free_axes[k++] = a;
        const std::size_t base = static_cast<std::size_t>(f) * cells_per_face_;
        for (std::size_t local = 0; local < cells_per_face_; ++local) {
            std::size_t rem = local;
            for (int k = 0; k < free_count; ++k) {
                idx[k] = static_cast<int>(rem % res_);
                rem /= res_;
            }
            const std::size_t cell = base + local;
            for (int k = 0; k < free_count; ++k) {
                std::size_t stride = 1;
                for (int q = 0; q < k; ++q) stride *= res_;
                if (idx[k] + 1 < res_) visit(cell, cell + stride);
                // Stitch across the cube edge where the free axis leaves this face.
                const bool low = idx[k] == 0;
                const bool high = idx[k] == res_ - 1;
                if (!low && !high) continue;
                for (int side = 0; side < 2; ++side) {
                    if ((side == 0 && !low) || (side == 1 && !high)) continue;
                    const int axis = free_axes[k];
                    const int other_face = 2 * axis + side;
                    if (other_face < f) continue;  // each edge pair once
                    // On the other face, `fixed` becomes free and `axis` becomes fixed.
                    std::size_t other_local = 0, weight = 1;
                    for (int a = 0; a < m_; ++a) {
                        if (a == axis) continue;
                        int value;
                        if (a == fixed) {
                            value = fixed_side == 0 ? 0 : res_ - 1;
                        } else {
                            int kk = 0;
                            while (free_axes[kk] != a) ++kk;
                            value = idx[kk];
                        }
                        other_local += weight * static_cast<std::size_t>(value);
                        weight *= res_;
                    }
                    visit(cell, static_cast<std::size_t>(other_face) * cells_per_face_ + other_local);
                }
            }
        }
    }
}

}  // namespace calorics
