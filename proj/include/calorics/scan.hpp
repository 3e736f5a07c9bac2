#pragma once

#include <optional>
#include <vector>

#include <json.hpp>

#include "calorics/constructions.hpp"
#include "calorics/nodal.hpp"

namespace calorics {

struct ScanRow {
    Rational eps;
    int count = 0;
    bool stable = false;
    bool admissible = false;
};

struct ScanReport {
    int target = 0;
    /// Rows sorted by eps, largest first.
    std::vector<ScanRow> rows;
    std::optional<Rational> largest_admissible;
    bool flagged() const { return !largest_admissible; }
};

/// 1/4, 1/8, ..., 1/64
std::vector<Rational> default_eps_grid();
/// The dyadic grid plus the family's default epsilon, when it has one.
std::vector<Rational> default_eps_grid(Family family, unsigned d);

/// Counts spec with every eps of the grid; eps is admissible when the stable count equals target.
ScanReport scan_epsilon(ConstructionSpec spec, std::vector<Rational> grid, int target,
                        std::optional<std::vector<int>> schedule = std::nullopt);

nlohmann::json to_json(const ScanReport& r);

}  // namespace calorics
