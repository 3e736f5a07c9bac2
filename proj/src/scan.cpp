#include "calorics/scan.hpp"

#include <algorithm>

#include "calorics/errors.hpp"

namespace calorics {

std::vector<Rational> default_eps_grid() {
    std::vector<Rational> grid;
    for (long den = 4; den <= 64; den *= 2) grid.emplace_back(1, den);
    return grid;
}

std::vector<Rational> default_eps_grid(Family family, unsigned d) {
    auto grid = default_eps_grid();
    if (auto e = default_epsilon(family, d)) grid.push_back(*e);
    std::sort(grid.begin(), grid.end(), [](const Rational& a, const Rational& b) { return a > b; });
    return grid;
}

ScanReport scan_epsilon(ConstructionSpec spec, std::vector<Rational> grid, int target,
                        std::optional<std::vector<int>> schedule) {
    if (grid.empty()) throw InvalidArgument("empty eps grid");
    for (const auto& e : grid)
        if (e <= 0) throw InvalidArgument("eps grid values must be positive");
    std::sort(grid.begin(), grid.end(), [](const Rational& a, const Rational& b) { return a > b; });
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    ScanReport report;
    report.target = target;
    spec.eps_from_float = false;
    for (const auto& e : grid) {
        spec.eps = e;
        const Polynomial p = build(spec);
        const ComponentReport c = schedule ? nodal_count(p, *schedule) : nodal_count(p);
        ScanRow row{e, c.total, c.stable, c.stable && c.total == target};
        if (row.admissible && !report.largest_admissible) report.largest_admissible = e;
        report.rows.push_back(row);
    }
    return report;
}

nlohmann::json to_json(const ScanReport& r) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : r.rows)
        rows.push_back({{"eps", to_string(row.eps)},
                        {"count", row.count},
                        {"stable", row.stable},
                        {"admissible", row.admissible}});
    nlohmann::json j{{"target", r.target}, {"rows", rows}, {"flagged", r.flagged()}};
    j["largest_admissible"] = r.largest_admissible ? nlohmann::json(to_string(*r.largest_admissible)) : nlohmann::json();
    return j;
}

}  // namespace calorics
