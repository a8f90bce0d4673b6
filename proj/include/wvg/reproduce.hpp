#pragma once

#include <array>
#include <string>
#include <vector>

#include "wvg/core.hpp"
#include "wvg/montecarlo.hpp"

namespace wvg {

/// WTA, PR, mixed(102/538) and CD(c=2) on the given game.
std::vector<Profile> ec_profiles(const Game& game);

/// One weight class of the Electoral College tables: state estimates are
/// pooled (averaged) over the class before ratios are taken.
struct ClassRow {
    double votes = 0.0;
    int states = 0;
    std::array<double, 4> value{};
    std::array<double, 4> standard_error{};
    std::array<double, 4> reference{};
};

struct EcTables {
    std::vector<ClassRow> payoffs;  ///< columns WTA, PR, mixed, CD
    std::vector<ClassRow> ratios;   ///< columns WTA/PR, mixed/PR, CD/PR, CD/WTA
    Method method = Method::MonteCarlo;
    std::uint64_t samples = 0;
};

/// Computes both tables by Monte Carlo (common draws for the four profiles)
/// or by the convolution oracle. Ratio standard errors are delta-method
/// values from the common-draw covariance for MC and 0 otherwise.
EcTables reproduce_ec(Method method, const McConfig& cfg = {});

/// The 4 × 4 FL/NY/WY table (3 states + per-capita average; WTA, PR, POP, GP).
struct Example1Table {
    std::array<std::string, 4> rows;
    std::array<std::array<double, 4>, 4> value{};
    std::array<std::array<double, 4>, 4> reference{};
};

Example1Table reproduce_example1();

} // namespace wvg
