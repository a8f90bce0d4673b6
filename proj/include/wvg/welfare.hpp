#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wvg/core.hpp"
#include "wvg/montecarlo.hpp"

namespace wvg {

enum class ParetoOutcome { ADominates, BDominates, Incomparable, Indistinguishable };

std::string to_string(ParetoOutcome outcome);

struct ParetoVerdict {
    ParetoOutcome outcome = ParetoOutcome::Indistinguishable;
    Vector margin;     ///< π_A - π_B per group
    Vector threshold;  ///< |margin| above this counts as a strict difference
    /// Per group: +1 if A is significantly better, -1 if B is, 0 otherwise.
    std::vector<int> significant;
};

/// Tolerance for comparisons between exact (non-statistical) estimates.
inline constexpr double kExactTolerance = 1e-9;

/// Pareto comparison of two payoff vectors. Statistical inputs use
/// z·√(SE_A² + SE_B²) as the strictness threshold, exact inputs kExactTolerance.
ParetoVerdict pareto_compare(const PayoffEstimate& a, const PayoffEstimate& b, double z = 3.0);

/// Same verdict from a common-random-number difference estimate π_A - π_B.
ParetoVerdict pareto_compare_diff(const PayoffEstimate& diff, double z = 3.0);

enum class GpScheme { Coefficients, Equalizing, Popular };

/// λ rescaled so that max λ_i = 1. Equalizing: λ_i ∝ 1/w_i; popular: λ_i ∝ n_i/w_i.
Vector gp_coefficients(const Game& game, GpScheme scheme, const Vector& lambda = {});

Profile gp_profile(const Game& game, GpScheme scheme, const Vector& lambda = {});

struct GpSearchOptions {
    /// Grid points per coordinate on [0,1]; the largest coordinate is fixed to 1.
    int grid_points = 21;
    /// When the grid holds no dominating point its spacing is halved
    /// (21 → 41 → 81) until the point count would exceed this.
    int max_grid_points = 81;
    /// Lattice step for the search; 0 picks the default for a proportional profile.
    double resolution = 0.0;
    /// Candidates passing at the search step are re-checked at step/refine.
    double refine = 4.0;
    std::size_t max_groups = 4;
    /// Visit every grid point even when branch and bound applies.
    bool exhaustive = false;
};

struct GpSearchResult {
    std::optional<Vector> lambda;
    std::size_t examined = 0;
};

/// First GP coefficient vector that Pareto-dominates `target` according to the
/// convolution oracle. Seeds (equalizing, then popular when populations exist)
/// are tried before the grid, which is refined when it holds no dominating
/// point. Under uniform margins the grid is searched by branch and bound
/// (upper halves first); otherwise it is walked in descending lexicographic order.
GpSearchResult find_dominating_gp(const Game& game, const MarginDistribution& dist, const Profile& target,
                                  const GpSearchOptions& options = {});

struct LorenzCurve {
    std::vector<double> fraction;  ///< k/n, k = 0..n
    std::vector<double> share;     ///< payoff share of the bottom k groups
};

LorenzCurve lorenz_curve(const Vector& payoffs);

enum class LorenzOrder { Dominates, Dominated, Crossing, Equal };

std::string to_string(LorenzOrder order);

/// Pointwise comparison of the two Lorenz curves (tolerance on shares).
LorenzOrder lorenz_dominates(const Vector& a, const Vector& b, double tolerance = 1e-12);

double gini(const Vector& payoffs);

} // namespace wvg
