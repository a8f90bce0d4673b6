#include "wvg/welfare.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <unordered_map>

#include "wvg/lattice.hpp"
#include "wvg/oracle.hpp"

namespace wvg {

namespace {

ParetoVerdict classify(Vector margin, Vector threshold) {
    ParetoVerdict v;
    bool better = false, worse = false;
    for (Eigen::Index i = 0; i < margin.size(); ++i) {
        int s = 0;
        if (margin[i] > threshold[i]) s = 1;
        if (margin[i] < -threshold[i]) s = -1;
        better |= s > 0;
        worse |= s < 0;
        v.significant.push_back(s);
    }
    if (better && !worse)
        v.outcome = ParetoOutcome::ADominates;
    else if (worse && !better)
        v.outcome = ParetoOutcome::BDominates;
    else if (better && worse)
        v.outcome = ParetoOutcome::Incomparable;
    else
        v.outcome = ParetoOutcome::Indistinguishable;
    v.margin = std::move(margin);
    v.threshold = std::move(threshold);
    return v;
}

Vector threshold_for(const Vector& se, bool statistical, double z) {
    if (!statistical) return Vector::Constant(se.size(), kExactTolerance);
    return (z * se).cwiseMax(kExactTolerance);
}

void require_nonnegative(const Vector& x) {
    if (x.size() == 0) throw UsageError("empty payoff vector");
    if ((x.array() < 0.0).any())
        throw UnsupportedError("Lorenz comparisons need non-negative payoffs");
    if (!(x.sum() > 0.0)) throw UnsupportedError("Lorenz comparisons need a positive total payoff");
}

} // namespace

std::string to_string(ParetoOutcome outcome) {
    switch (outcome) {
        case ParetoOutcome::ADominates: return "A dominates";
        case ParetoOutcome::BDominates: return "B dominates";
        case ParetoOutcome::Incomparable: return "incomparable";
        case ParetoOutcome::Indistinguishable: return "indistinguishable";
    }
    return "?";
}

ParetoVerdict pareto_compare(const PayoffEstimate& a, const PayoffEstimate& b, double z) {
    if (a.size() != b.size()) throw UsageError("payoff vectors cover different groups");
    const bool statistical = a.is_statistical() || b.is_statistical();
    const Vector se = (a.standard_error.cwiseAbs2() + b.standard_error.cwiseAbs2()).cwiseSqrt();
    return classify(a.mean - b.mean, threshold_for(se, statistical, z));
}

ParetoVerdict pareto_compare_diff(const PayoffEstimate& diff, double z) {
    return classify(diff.mean, threshold_for(diff.standard_error, diff.is_statistical(), z));
}

// ---------------------------------------------------------------- GP profiles

Vector gp_coefficients(const Game& game, GpScheme scheme, const Vector& lambda) {
    Vector l;
    switch (scheme) {
        case GpScheme::Coefficients:
            if (static_cast<std::size_t>(lambda.size()) != game.size())
                throw ConfigError("GP coefficient count does not match the number of groups");
            l = lambda;
            break;
        case GpScheme::Equalizing: l = game.weights().cwiseInverse(); break;
        case GpScheme::Popular: l = game.populations().cwiseQuotient(game.weights()); break;
    }
    if (!l.allFinite() || (l.array() < 0.0).any()) throw ConfigError("GP coefficients must be finite and non-negative");
    const double top = l.maxCoeff();
    if (!(top > 0.0)) throw ConfigError("GP coefficients are all zero");
    return l / top;
}

Profile gp_profile(const Game& game, GpScheme scheme, const Vector& lambda) {
    return Profile::gp(gp_coefficients(game, scheme, lambda));
}

// ---------------------------------------------------------------- dominating GP search

namespace {

/// Convolution-oracle payoffs of GP profiles whose coefficients lie on a fixed
/// grid, with every factor's spectrum computed once.
class GpGridEvaluator {
public:
    GpGridEvaluator(const Game& game, const MarginDistribution& dist, std::vector<double> values, double h)
        : game_(game), values_(std::move(values)), h_(h) {
        const std::size_t n = game.size();
        factors_.resize(n);
        nodes_.resize(n);
        std::size_t full = 1;
        for (std::size_t j = 0; j < n; ++j) {
            const double w = game.weights()[static_cast<Eigen::Index>(j)];
            for (double v : values_) {
                factors_[j].push_back(lattice::project(w, Rule::gp(v), dist.marginal(), h));
                nodes_[j].push_back(lattice::payoff_nodes(dist.marginal(), Rule::gp(v), w, h));
            }
            full += factors_[j].back().mass.size() - 1;
        }
        fft_ = std::make_unique<lattice::FourierConvolver>(lattice::fft_length(full));
        spectra_.resize(n);
        for (std::size_t j = 0; j < n; ++j)
            for (const auto& f : factors_[j]) spectra_[j].push_back(fft_->forward(f));
    }

    /// Payoff of group i when group j uses coefficient values_[idx[j]].
    double payoff(std::size_t i, const std::vector<std::size_t>& idx) const {
        const double lambda = values_[idx[i]];
        if (lambda == 0.0) return 0.0;
        lattice::Spectrum prod(fft_->spectrum_size(), 1.0);
        std::ptrdiff_t half = 0;
        std::size_t len = 1;
        for (std::size_t j = 0; j < idx.size(); ++j) {
            if (j == i) continue;
            const auto& s = spectra_[j][idx[j]];
            for (std::size_t k = 0; k < prod.size(); ++k) prod[k] *= s[k];
            half += factors_[j][idx[j]].half_width;
            len += factors_[j][idx[j]].mass.size() - 1;
        }
        auto mass = fft_->inverse(prod, len);
        lattice::clean(mass, true);
        const OpponentSumDistribution opp(h_, std::move(mass), half);
        const double scale = game_.weights()[static_cast<Eigen::Index>(i)] * lambda;
        long double acc = 0.0L;
        for (const auto& q : nodes_[i][idx[i]]) acc += q.weight * q.x * opp.central(scale * q.x);
        return static_cast<double>(2.0L * acc);
    }

private:
    const Game& game_;
    std::vector<double> values_;
    double h_;
    std::vector<std::vector<std::vector<QuadratureNode>>> nodes_;
    std::vector<std::vector<lattice::Factor>> factors_;
    std::unique_ptr<lattice::FourierConvolver> fft_;
    std::vector<std::vector<lattice::Spectrum>> spectra_;
};

double resolution_for(const Game& game, const Profile& profile, double cap) {
    return std::min(cap, default_resolution(game, profile));
}

bool verify(const Game& game, const MarginDistribution& dist, const Profile& target, const Vector& lambda,
            double h_search, double refine) {
    const Profile candidate = Profile::gp(lambda);
    const double h = std::min(resolution_for(game, candidate, h_search), resolution_for(game, target, h_search)) / refine;
    const auto a = conv_payoffs(game, candidate, dist, {h});
    const auto b = conv_payoffs(game, target, dist, {h});
    return pareto_compare(a, b).outcome == ParetoOutcome::ADominates;
}

/// Next tuple in descending lexicographic order; false after the all-zero tuple.
bool step_down(std::vector<std::size_t>& idx, std::size_t top) {
    for (std::size_t d = idx.size(); d-- > 0;) {
        if (idx[d] > 0) {
            --idx[d];
            return true;
        }
        idx[d] = top;
    }
    return false;
}

/// One pass over the grid {values}ⁿ restricted to max coordinate = top.
struct GridSearch {
    const Game& game;
    const MarginDistribution& dist;
    const Profile& target;
    const Vector& target_pay;
    const std::vector<double>& values;
    double h;
    double refine;
    std::size_t& examined;

    GpGridEvaluator eval{game, dist, values, h};
    std::size_t top = values.size() - 1;
    std::size_t n = game.size();
    std::unordered_map<std::uint64_t, double> cache{};

    double margin(std::size_t i, const std::vector<std::size_t>& idx) {
        std::uint64_t key = 0;
        for (std::size_t k : idx) key = key * (top + 1) + k;
        key = key * n + i;
        if (const auto it = cache.find(key); it != cache.end()) return it->second;
        const double m = eval.payoff(i, idx) - target_pay[static_cast<Eigen::Index>(i)];
        cache.emplace(key, m);
        return m;
    }

    std::optional<Vector> accept(const std::vector<std::size_t>& idx) {
        Vector lambda(static_cast<Eigen::Index>(n));
        for (std::size_t j = 0; j < n; ++j) lambda[static_cast<Eigen::Index>(j)] = values[idx[j]];
        if (verify(game, dist, target, lambda, h, refine)) return lambda;
        return std::nullopt;
    }

    /// Descending lexicographic walk; the group that last failed is checked first.
    std::optional<Vector> exhaustive() {
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::vector<std::size_t> idx(n, top);
        do {
            if (*std::max_element(idx.begin(), idx.end()) != top) continue;
            ++examined;
            bool rejected = false, strict = false;
            for (std::size_t r = 0; r < n && !rejected; ++r) {
                const std::size_t i = order[r];
                const double m = eval.payoff(i, idx) - target_pay[static_cast<Eigen::Index>(i)];
                if (m < -kExactTolerance) {
                    rejected = true;
                    std::rotate(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(r),
                                order.begin() + static_cast<std::ptrdiff_t>(r) + 1);
                }
                strict |= m > kExactTolerance;
            }
            if (rejected || !strict) continue;
            if (auto lambda = accept(idx)) return lambda;
        } while (step_down(idx, top));
        return std::nullopt;
    }

    // With symmetric unimodal margins π_i rises in λ_i and falls in every other
    // λ_j, so over a box it is largest at (hi_i, lo_-i). A box is dropped when
    // that corner already loses for some group, or gains for none.
    std::optional<Vector> box(std::vector<std::size_t>& lo, std::vector<std::size_t>& hi) {
        const bool point = lo == hi;
        bool strict = false;
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<std::size_t> corner = lo;
            corner[i] = hi[i];
            const double m = margin(i, corner);
            if (m < -(point ? kExactTolerance : kPruneSlack)) return std::nullopt;
            strict |= m > kExactTolerance;
        }
        if (!strict) return std::nullopt;
        if (point) {
            ++examined;
            return accept(lo);
        }
        std::size_t d = 0;
        for (std::size_t j = 1; j < n; ++j)
            if (hi[j] - lo[j] > hi[d] - lo[d]) d = j;
        const std::size_t mid = lo[d] + (hi[d] - lo[d]) / 2;
        const std::size_t saved_lo = lo[d], saved_hi = hi[d];
        lo[d] = mid + 1;
        auto found = box(lo, hi);
        lo[d] = saved_lo;
        if (found) return found;
        hi[d] = mid;
        found = box(lo, hi);
        hi[d] = saved_hi;
        return found;
    }

    /// Branch and bound over the faces {λ_k = 1, λ_j < 1 for j < k}.
    std::optional<Vector> bounded() {
        for (std::size_t k = 0; k < n; ++k) {
            if (top == 0 && k > 0) break;
            std::vector<std::size_t> lo(n, 0), hi(n, top);
            lo[k] = top;
            for (std::size_t j = 0; j < k; ++j) hi[j] = top - 1;
            if (auto found = box(lo, hi)) return found;
        }
        return std::nullopt;
    }

    static constexpr double kPruneSlack = 1e-6;
};

} // namespace

GpSearchResult find_dominating_gp(const Game& game, const MarginDistribution& dist, const Profile& target,
                                  const GpSearchOptions& options) {
    const std::size_t n = game.size();
    if (n > options.max_groups) throw UsageError("GP grid search is limited to small games");
    if (target.size() != n) throw UsageError("profile size does not match the game");
    if (options.grid_points < 2) throw UsageError("GP grid needs at least two points");
    if (!dist.is_iid()) throw UnsupportedError("GP search relies on the convolution oracle (independent margins)");

    GpSearchResult result;
    const Profile pr = Profile::symmetric(Rule::pr(), n);
    const double h = options.resolution > 0.0 ? options.resolution
                                              : std::min(default_resolution(game, pr), default_resolution(game, target));
    const Vector target_pay = conv_payoffs(game, target, dist, {h}).mean;

    // Seeds first, checked with the general oracle.
    std::vector<Vector> seeds{gp_coefficients(game, GpScheme::Equalizing)};
    if (game.has_populations()) seeds.push_back(gp_coefficients(game, GpScheme::Popular));
    for (const auto& lambda : seeds) {
        ++result.examined;
        const Profile p = Profile::gp(lambda);
        const double hp = std::min(h, default_resolution(game, p));
        const auto pay = conv_payoffs(game, p, dist, {hp});
        PayoffEstimate tgt;
        tgt.mean = target_pay;
        tgt.standard_error = Vector::Zero(static_cast<Eigen::Index>(n));
        tgt.method = Method::Convolution;
        if (pareto_compare(pay, tgt).outcome == ParetoOutcome::ADominates &&
            verify(game, dist, target, lambda, h, options.refine)) {
            result.lambda = lambda;
            return result;
        }
    }

    // Coarse grid first; each refinement halves the spacing.
    for (int points = options.grid_points; points <= std::max(options.grid_points, options.max_grid_points);
         points = 2 * points - 1) {
        const std::size_t top = static_cast<std::size_t>(points - 1);
        std::vector<double> values(top + 1);
        for (std::size_t k = 0; k <= top; ++k) values[k] = static_cast<double>(k) / static_cast<double>(top);
        GridSearch search{game, dist, target, target_pay, values, h, options.refine, result.examined};
        if (auto lambda = dist.marginal().is_uniform() && !options.exhaustive ? search.bounded() : search.exhaustive()) {
            result.lambda = std::move(lambda);
            return result;
        }
    }
    return result;
}

// ---------------------------------------------------------------- Lorenz and Gini

std::string to_string(LorenzOrder order) {
    switch (order) {
        case LorenzOrder::Dominates: return "dominates";
        case LorenzOrder::Dominated: return "dominated";
        case LorenzOrder::Crossing: return "crossing";
        case LorenzOrder::Equal: return "equal";
    }
    return "?";
}

LorenzCurve lorenz_curve(const Vector& payoffs) {
    require_nonnegative(payoffs);
    std::vector<double> sorted(payoffs.begin(), payoffs.end());
    std::sort(sorted.begin(), sorted.end());
    const double total = std::accumulate(sorted.begin(), sorted.end(), 0.0);
    const std::size_t n = sorted.size();
    LorenzCurve c;
    c.fraction.push_back(0.0);
    c.share.push_back(0.0);
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        acc += sorted[k];
        c.fraction.push_back(static_cast<double>(k + 1) / static_cast<double>(n));
        c.share.push_back(acc / total);
    }
    c.share.back() = 1.0;
    return c;
}

LorenzOrder lorenz_dominates(const Vector& a, const Vector& b, double tolerance) {
    if (a.size() != b.size()) throw UsageError("Lorenz comparison needs vectors of equal length");
    const auto la = lorenz_curve(a);
    const auto lb = lorenz_curve(b);
    bool above = false, below = false;
    for (std::size_t k = 0; k < la.share.size(); ++k) {
        const double d = la.share[k] - lb.share[k];
        above |= d > tolerance;
        below |= d < -tolerance;
    }
    if (above && below) return LorenzOrder::Crossing;
    if (above) return LorenzOrder::Dominates;
    if (below) return LorenzOrder::Dominated;
    return LorenzOrder::Equal;
}

double gini(const Vector& payoffs) {
    require_nonnegative(payoffs);
    const auto n = static_cast<double>(payoffs.size());
    const double mu = payoffs.mean();
    double acc = 0.0;
    for (double x : payoffs)
        for (double y : payoffs) acc += std::abs(x - y);
    return acc / (2.0 * n * n * mu);
}

} // namespace wvg
