#pragma once

#include <span>
#include <string_view>

namespace wvg::reference {

// Published reference values for the Electoral College and the
// Florida / New York / Wyoming illustration (uniform iid margins).

inline constexpr double kMixedShare = 102.0 / 538.0;
inline constexpr double kDistrictShare = 2.0;

struct EcPayoffRow {
    int votes;
    int states;
    double wta, pr, mixed, cd;
};

struct EcRatioRow {
    int votes;
    int states;
    double wta_pr, mixed_pr, cd_pr, cd_wta;
};

struct Example1Row {
    std::string_view name;
    double wta, pr, pop, gp;
};

std::span<const EcPayoffRow> ec_payoffs();
std::span<const EcRatioRow> ec_ratios();
/// Three states, then the population-weighted average row.
std::span<const Example1Row> example1();

} // namespace wvg::reference
