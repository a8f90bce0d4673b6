#pragma once

#include <algorithm>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "wvg/core.hpp"

namespace wvg::testing {

inline Game make_game(const std::vector<double>& weights) {
    std::vector<GroupSpec> groups;
    for (std::size_t i = 0; i < weights.size(); ++i) groups.push_back({"g" + std::to_string(i + 1), weights[i], {}});
    return Game(std::move(groups));
}

/// Integer weights in [1, max_weight]; redrawn until the dictator flag matches.
/// Two groups always contain a dictator.
inline Game random_game(std::mt19937_64& rng, std::size_t n, bool dictator, int max_weight = 20) {
    if (n < 3 && !dictator) throw std::invalid_argument("fewer than 3 groups always have a dictator");
    std::uniform_int_distribution<int> w(1, max_weight);
    for (;;) {
        std::vector<double> weights(n);
        for (auto& x : weights) x = w(rng);
        if (dictator) weights[std::uniform_int_distribution<std::size_t>(0, n - 1)(rng)] *= 4;
        Game g = make_game(weights);
        if (g.has_dictator() == dictator) return g;
    }
}

/// Odd non-decreasing step rule with 1-3 levels.
inline Rule random_step_rule(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const int k = std::uniform_int_distribution<int>(1, 3)(rng);
    std::vector<double> thresholds{0.0}, values;
    for (int j = 1; j < k; ++j) thresholds.push_back(0.05 + 0.9 * u(rng));
    std::sort(thresholds.begin(), thresholds.end());
    thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());
    for (std::size_t j = 0; j < thresholds.size(); ++j) values.push_back(u(rng));
    std::sort(values.begin(), values.end());
    values.back() = std::max(values.back(), 0.2);
    std::vector<StepLevel> levels;
    for (std::size_t j = 0; j < thresholds.size(); ++j) levels.push_back({thresholds[j], values[j]});
    return Rule::step(levels);
}

/// Built-in affine rules with random parameters (CD needs the group weight).
inline Rule random_affine_rule(std::mt19937_64& rng, double weight) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    switch (std::uniform_int_distribution<int>(0, 4)(rng)) {
        case 0: return Rule::wta();
        case 1: return Rule::pr();
        case 2: return Rule::mixed(u(rng));
        case 3: return Rule::cd(std::max(0.01, u(rng)) * weight, weight);
        default: return Rule::gp(0.2 + 0.8 * u(rng));
    }
}

inline Rule random_rule(std::mt19937_64& rng, double weight) {
    return std::bernoulli_distribution(0.5)(rng) ? random_step_rule(rng) : random_affine_rule(rng, weight);
}

inline Profile random_profile(std::mt19937_64& rng, const Game& game) {
    std::vector<Rule> rules;
    for (double w : game.weights()) rules.push_back(random_rule(rng, w));
    return Profile(std::move(rules));
}

} // namespace wvg::testing
