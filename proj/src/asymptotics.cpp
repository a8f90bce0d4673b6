#include "wvg/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace wvg {

namespace {

void require_iid(const MarginDistribution& dist) {
    if (!dist.is_iid()) throw UnsupportedError("asymptotic limits assume independent margins");
}

double zero_mass(const Marginal& marginal) {
    double p = 0.0;
    for (const auto& a : marginal.atoms())
        if (a.value == 0.0) p += a.probability;
    return p;
}

} // namespace

double corr_factor(const Rule& rule, const MarginDistribution& dist) {
    require_iid(dist);
    const auto m = moments(dist);
    const auto r = rule_moments(rule, dist.marginal());
    if (r.phi_sq <= 0.0 || m.mean_sq <= 0.0) return 0.0;
    return r.cross / std::sqrt(m.mean_sq * r.phi_sq);
}

double mixed_corr(double a, const MarginDistribution& dist) {
    if (!(a >= 0.0 && a <= 1.0)) throw ConfigError("mixing weight a must lie in [0,1]");
    require_iid(dist);
    const auto m = moments(dist);
    const double p_nonzero = 1.0 - zero_mass(dist.marginal());
    const double num = a * m.mean_abs + (1.0 - a) * m.mean_sq;
    const double den = a * a * p_nonzero + 2.0 * a * (1.0 - a) * m.mean_abs + (1.0 - a) * (1.0 - a) * m.mean_sq;
    if (den <= 0.0 || m.mean_sq <= 0.0) return 0.0;
    return num / std::sqrt(m.mean_sq * den);
}

double mean_square_weight(const Game& game) {
    return game.weights().squaredNorm() / static_cast<double>(game.size());
}

double symmetric_slope(const Rule& rule, const MarginDistribution& dist, const Game& game) {
    require_iid(dist);
    const auto r = rule_moments(rule, dist.marginal());
    if (r.phi_sq <= 0.0) return 0.0;
    return 2.0 * r.cross / std::sqrt(r.phi_sq * mean_square_weight(game));
}

Vector symmetric_limit(const Rule& rule, const MarginDistribution& dist, const Game& game) {
    return symmetric_slope(rule, dist, game) * game.weights();
}

CdLimit cd_limit(double c, const MarginDistribution& dist, const Game& game) {
    if (!(c > 0.0) || c > game.min_weight())
        throw ConfigError("district share c must lie in (0, min weight]");
    require_iid(dist);
    const auto m = moments(dist);
    const double p_nonzero = 1.0 - zero_mass(dist.marginal());

    // (1/n) Σ_j E[(c·sgnΘ + (w_j - c)Θ)²]
    double acc = 0.0;
    for (double w : game.weights()) {
        const double r = w - c;
        acc += c * c * p_nonzero + 2.0 * c * r * m.mean_abs + r * r * m.mean_sq;
    }
    const double denom = std::sqrt(acc / static_cast<double>(game.size()));

    CdLimit out;
    out.B = 2.0 * m.mean_sq / denom;
    out.C = 2.0 * c * (m.mean_abs - m.mean_sq) / denom;
    out.limits = (out.B * game.weights().array() + out.C).matrix();
    return out;
}

Crossing cd_crossing(double c, const Rule& reference, const MarginDistribution& dist, const Game& game) {
    const auto cd = cd_limit(c, dist, game);
    const double a = symmetric_slope(reference, dist, game);
    Crossing out;
    if (a <= cd.B) {
        out.w_hat = std::numeric_limits<double>::infinity();
        out.w_star = game.max_weight();
        out.cd_dominates_everywhere = true;
        return out;
    }
    out.w_hat = cd.C / (a - cd.B);
    out.w_star = std::clamp(out.w_hat, game.min_weight(), game.max_weight());
    return out;
}

Vector limit_payoffs(const Vector& limits, std::size_t n) {
    return limits / std::sqrt(2.0 * std::numbers::pi * static_cast<double>(n));
}

AsymptoticSummary summarize(const Rule& reference, double c, const MarginDistribution& dist, const Game& game) {
    AsymptoticSummary s;
    s.corr = corr_factor(reference, dist);
    s.A_phi = symmetric_slope(reference, dist, game);
    s.mean_sq_weight = mean_square_weight(game);
    const auto cd = cd_limit(c, dist, game);
    s.B = cd.B;
    s.C = cd.C;
    const auto x = cd_crossing(c, reference, dist, game);
    s.w_star = x.w_star;
    s.cd_dominates_everywhere = x.cd_dominates_everywhere;
    return s;
}

} // namespace wvg
