#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "wvg/core.hpp"
#include "wvg/montecarlo.hpp"

namespace wvg {

/// Law of an opponent sum S = Σ_{j≠i} w_j φ_j(Θ_j) on the lattice {k·h}.
///
/// Each lattice mass is read as spread uniformly over its cell
/// [v - h/2, v + h/2]; with that reading an atom sitting exactly on a
/// boundary counts half in, half out.
class OpponentSumDistribution {
public:
    OpponentSumDistribution() = default;
    /// `mass[k]` sits at (k - offset)·resolution.
    OpponentSumDistribution(double resolution, std::vector<double> mass, std::ptrdiff_t offset);

    double resolution() const noexcept { return step_; }
    const std::vector<double>& pmf() const noexcept { return mass_; }
    std::ptrdiff_t offset() const noexcept { return offset_; }
    std::size_t size() const noexcept { return mass_.size(); }
    double value(std::size_t k) const noexcept {
        return static_cast<double>(static_cast<std::ptrdiff_t>(k) - offset_) * step_;
    }
    /// Mass at lattice value v (nearest lattice point), 0 outside the grid.
    double mass_at(double v) const noexcept;

    /// P{S ≤ y} under the cell-spread reading.
    double cdf(double y) const noexcept;
    /// P{-a < S ≤ a} for a ≥ 0; antisymmetric in a.
    double central(double a) const noexcept { return cdf(a) - cdf(-a); }
    double total() const noexcept;
    double mean() const noexcept;
    double variance() const noexcept;

    /// Every lattice point in [-half_width, half_width] carries positive mass.
    bool has_full_support(double half_width) const noexcept;

private:
    double step_ = 1.0;
    std::vector<double> mass_{1.0};
    std::ptrdiff_t offset_ = 0;
    std::vector<double> below_;  // below_[k] = Σ_{m<k} mass_[m]
};

enum class ConvolutionMethod { Auto, Direct, Fourier };

struct LatticeOptions {
    /// Lattice step; 0 selects default_resolution().
    double resolution = 0.0;
    ConvolutionMethod method = ConvolutionMethod::Auto;
};

struct ConvolutionOptions {
    double resolution = 0.0;
    ConvolutionMethod method = ConvolutionMethod::Auto;
};

/// Default lattice step as a fraction of the total weight. Hat projection
/// inflates each factor's variance by O(h²); at this step the resulting payoff
/// bias on the Electoral College is below 10⁻⁵.
inline constexpr double kDefaultResolutionFraction = 2.5e-4;

/// kDefaultResolutionFraction × total weight; when every weight is an integer
/// the step is snapped to a divisor of 1 (or an integer) so winner-take-all
/// atoms fall on lattice points. Never coarser than the smallest nonzero w_j·sup|φ_j|.
double default_resolution(const Game& game, const Profile& profile);

/// Exact ex ante payoffs under an all-WTA profile for iid symmetric margins,
/// by dynamic programming over the integer-scaled opponent weight sum.
PayoffEstimate wta_exact_payoffs(const Game& game, const MarginDistribution& dist);

/// Lattice law of the opponent sum for group `exclude`.
OpponentSumDistribution opponent_sum(const Game& game, const Profile& profile, const MarginDistribution& dist,
                                     std::size_t exclude, const LatticeOptions& options = {});

/// Opponent sums for every group at once (prefix/suffix products when Fourier).
std::vector<OpponentSumDistribution> opponent_sums(const Game& game, const Profile& profile,
                                                   const MarginDistribution& dist, const LatticeOptions& options = {});

/// π_i = 2∫₀¹ θ·P{-w_iφ_i(θ) < S ≤ w_iφ_i(θ)} dF(θ) with S from opponent_sums.
PayoffEstimate conv_payoffs(const Game& game, const Profile& profile, const MarginDistribution& dist,
                            const ConvolutionOptions& options = {});

/// Payoff of group i alone, given its opponent sum.
double conv_payoff(const Game& game, const Profile& profile, const MarginDistribution& dist, std::size_t i,
                   const OpponentSumDistribution& opp);

/// Midpoint-grid expectation over [-1,1]ⁿ (atoms for discrete marginals,
/// latent grid for the one-factor law); ties contribute 0. About
/// `grid_per_dimension` cells per axis, with cell edges at 0 and, for
/// independent margins, at ± each group's rule breakpoints.
PayoffEstimate bruteforce_payoffs(const Game& game, const Profile& profile, const MarginDistribution& dist,
                                  int grid_per_dimension);

/// θ_i·(P{w_i x_i + S > 0} - P{w_i x_i + S < 0}); the tie atom contributes 0.
double interim_payoff(const Game& game, std::size_t i, double x, double theta,
                      const OpponentSumDistribution& opp);

/// All grid points x maximising interim_payoff (within 1e-12).
std::vector<double> best_response(const Game& game, std::size_t i, double theta,
                                  const OpponentSumDistribution& opp, std::span<const double> x_grid);

/// Evenly spaced grid on [-1,1] with `points` points (points ≥ 2).
std::vector<double> uniform_grid(int points);

} // namespace wvg
