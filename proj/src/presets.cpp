#include "scdma/presets.hpp"

#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>

#include "scdma/design.hpp"

namespace scdma::presets {

namespace {

constexpr double pi = std::numbers::pi;

using Row = std::vector<std::optional<double>>;

SignatureMatrix from_rows(const std::vector<Row>& rows) {
    std::vector<std::optional<double>> entries;
    for (const auto& r : rows) entries.insert(entries.end(), r.begin(), r.end());
    return SignatureMatrix(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()),
                           std::move(entries));
}

}  // namespace

std::vector<double> table1_phases(int k_users) {
    switch (k_users) {
        case 1: return {0.0};
        case 2: return {0.0, pi / 6};
        case 3: return {0.0, 0.0973751320 * pi, 0.4026248680 * pi};
        case 4: return {0.0, 0.0477 * pi, 0.0947 * pi, 0.1965 * pi};
        case 5: return {0.0, 0.0851 * pi, 0.1368 * pi, 0.1631 * pi, 0.1894 * pi};
        case 6:
            return {0.0,
                    0.0291818590 * pi,
                    0.0703832329 * pi,
                    0.1656521240 * pi,
                    0.4729030224 * pi,
                    0.4864205732 * pi};
        default: throw std::invalid_argument("single-resource phase vectors cover K = 1..6");
    }
}

double table1_delta(int k_users) {
    switch (k_users) {
        case 1: return std::sqrt(2.0);
        case 2: return std::sqrt(3.0) - 1.0;
        case 3: return 0.4310;
        case 4: return 0.2086;
        case 5: return 0.1142;
        case 6: return 0.0595;
        default: throw std::invalid_argument("single-resource optima cover K = 1..6");
    }
}

SignatureMatrix table1_matrix(int k_users) {
    auto phases = table1_phases(k_users);
    std::vector<std::optional<double>> entries(phases.begin(), phases.end());
    return SignatureMatrix(1, k_users, std::move(entries));
}

SignatureMatrix optimized_4x6() {
    const std::optional<double> z;
    return from_rows({
        {0.0, 0.1431 * pi, 0.2021 * pi, z, z, z},
        {0.0, z, z, 0.3127 * pi, 0.3765 * pi, z},
        {z, 0.1431 * pi, z, 0.5736 * pi, z, 0.2667 * pi},
        {z, z, 0.2021 * pi, z, 0.3935 * pi, 0.3078 * pi},
    });
}

SignatureMatrix block_4x6() {
    return construction_1(3, 2, {{pi / 6, pi / 6}, {pi / 3, pi / 6}, {pi / 3, pi}});
}

SignatureMatrix block_6x8() {
    return construction_1(
        4, 2, {{pi / 6, pi / 6}, {pi / 3, pi / 3}, {pi / 6, pi / 6}, {pi / 6, pi / 6}});
}

SignatureMatrix chained_4x8() {
    return construction_2(4, 2, {0.0, 0.2618 * pi},
                          {{0.1435 * pi, 0.1279 * pi},
                           {0.2297 * pi, 0.3505 * pi},
                           {0.3935 * pi, 0.3610 * pi}},
                          {{0.2297 * pi, 0.2269 * pi}});
}

SignatureMatrix two_user_pi4() {
    return SignatureMatrix(1, 2, {0.0, pi / 4});
}

FactorGraph fig2_graph() {
    return FactorGraph(4, 6,
                       {{0, 0}, {0, 1}, {0, 2}, {1, 0}, {1, 3}, {1, 4}, {2, 1}, {2, 3}, {2, 5},
                        {3, 2}, {3, 4}, {3, 5}});
}

std::vector<std::string> names() {
    return {"table1-k1", "table1-k2", "table1-k3", "table1-k4",   "table1-k5",    "table1-k6",
            "tree-k4",   "opt-4x6",   "block-4x6", "block-6x8",   "chained-4x8",  "two-user-pi4"};
}

SignatureMatrix by_name(const std::string& name) {
    if (name.rfind("table1-k", 0) == 0 && name.size() == 9 && name[8] >= '1' && name[8] <= '6')
        return table1_matrix(name[8] - '0');
    if (name == "tree-k4") return tree_code(4);
    if (name == "opt-4x6") return optimized_4x6();
    if (name == "block-4x6") return block_4x6();
    if (name == "block-6x8") return block_6x8();
    if (name == "chained-4x8") return chained_4x8();
    if (name == "two-user-pi4") return two_user_pi4();
    throw std::invalid_argument("unknown preset: " + name);
}

}  // namespace scdma::presets
