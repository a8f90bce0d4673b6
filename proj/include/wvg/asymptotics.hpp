#pragma once

#include "wvg/core.hpp"

namespace wvg {

/// Large-n limit coefficients. Payoffs satisfy √(2πn)·π_i → A_phi·w_i for a
/// symmetric profile and → B·w_i + C under the congressional-district profile.
struct AsymptoticSummary {
    double corr = 0.0;
    double A_phi = 0.0;
    double B = 0.0;
    double C = 0.0;
    double w_star = 0.0;
    /// Set when A_phi ≤ B: the district profile beats the reference at every weight.
    bool cd_dominates_everywhere = false;
    /// (Σ w_i²)/n.
    double mean_sq_weight = 0.0;
};

/// Corr[Θ, φ(Θ)]; 0 when φ(Θ) ≡ 0.
double corr_factor(const Rule& rule, const MarginDistribution& dist);

/// Closed-form Corr[Θ, φᵃ(Θ)] for the mixed rule.
double mixed_corr(double a, const MarginDistribution& dist);

double mean_square_weight(const Game& game);

/// A^φ = 2·E[Θφ(Θ)] / √(E[φ(Θ)²]·(Σw²/n)).
double symmetric_slope(const Rule& rule, const MarginDistribution& dist, const Game& game);

/// A^φ·w_i per group: the limit of √(2πn)·π_i.
Vector symmetric_limit(const Rule& rule, const MarginDistribution& dist, const Game& game);

struct CdLimit {
    double B = 0.0;
    double C = 0.0;
    Vector limits;  ///< B·w_i + C
};

CdLimit cd_limit(double c, const MarginDistribution& dist, const Game& game);

struct Crossing {
    double w_star = 0.0;
    /// Unclamped root C/(A - B); infinite when A ≤ B.
    double w_hat = 0.0;
    bool cd_dominates_everywhere = false;
};

/// Weight at which A^φ·w meets B·w + C, clamped to [min w, max w].
Crossing cd_crossing(double c, const Rule& reference, const MarginDistribution& dist, const Game& game);

/// Limit prediction of π itself: limit / √(2πn).
Vector limit_payoffs(const Vector& limits, std::size_t n);

AsymptoticSummary summarize(const Rule& reference, double c, const MarginDistribution& dist, const Game& game);

} // namespace wvg
