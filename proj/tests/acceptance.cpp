// Acceptance run: one PASS/FAIL line per criterion with the measured numbers.
// Usage: acceptance [criterion ...]   (default: all)

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "support.hpp"
#include "wvg/asymptotics.hpp"
#include "wvg/data.hpp"
#include "wvg/montecarlo.hpp"
#include "wvg/oracle.hpp"
#include "wvg/reference.hpp"
#include "wvg/reproduce.hpp"
#include "wvg/welfare.hpp"

using namespace wvg;

namespace {

const MarginDistribution kUniform = MarginDistribution::uniform_iid();

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* format, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, format, args...);
    return buf;
}

class Stopwatch {
public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

const reference::EcPayoffRow& payoff_row(double votes) {
    for (const auto& r : reference::ec_payoffs())
        if (r.votes == votes) return r;
    throw std::logic_error("no reference row");
}

// Games and opponent profiles shared by criteria 4 and 5.
struct Instance {
    Game game;
    Profile opponents;
};

const std::vector<Instance>& property_instances() {
    static const std::vector<Instance> instances = [] {
        std::mt19937_64 rng(4);
        std::vector<Instance> out;
        for (int t = 0; t < 100; ++t) {
            const std::size_t n = 3 + t % 2;
            Game g = wvg::testing::random_game(rng, n, false);
            Profile p = wvg::testing::random_profile(rng, g);
            out.push_back({std::move(g), std::move(p)});
        }
        return out;
    }();
    return instances;
}

Outcome exact_wta() {
    const Game g = builtin_ec();
    const Stopwatch clock;
    const auto est = wta_exact_payoffs(g, kUniform);
    const double secs = clock.seconds();
    double worst = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double w = g.weights()[static_cast<Eigen::Index>(i)];
        worst = std::max(worst, std::abs(est.mean[static_cast<Eigen::Index>(i)] - payoff_row(w).wta));
    }
    return {worst <= 1.5e-4 && secs < 5.0, fmt("max |exact - table| = %.2e (tol 1.5e-4), %.3f s", worst, secs)};
}

Outcome mc_tables() {
    McConfig cfg;
    cfg.samples = 100'000'000;
    const Stopwatch clock;
    const auto t = reproduce_ec(Method::MonteCarlo, cfg);
    const double secs = clock.seconds();
    double pay = 0.0, rat = 0.0;
    for (const auto& row : t.payoffs)
        for (int k = 0; k < 4; ++k) pay = std::max(pay, std::abs(row.value[k] - row.reference[k]));
    for (const auto& row : t.ratios)
        for (int k = 0; k < 4; ++k) rat = std::max(rat, std::abs(row.value[k] - row.reference[k]));
    return {pay <= 1e-3 && rat <= 4e-3 && secs < 300.0,
            fmt("1e8 draws: max payoff error %.2e (tol 1e-3), max ratio error %.2e (tol 4e-3), %.1f s", pay, rat,
                secs)};
}

Outcome example1() {
    const Stopwatch clock;
    const auto t = reproduce_example1();
    const double secs = clock.seconds();
    static const char* columns[] = {"WTA", "PR", "POP", "GP"};
    double worst = 0.0;
    std::string misses;
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) {
            const double e = std::abs(t.value[r][c] - t.reference[r][c]);
            worst = std::max(worst, e);
            if (e > 1e-3) misses += fmt(" %s/%s %.4f vs %.3f;", t.rows[r].c_str(), columns[c], t.value[r][c], t.reference[r][c]);
        }
    return {worst <= 1e-3 && secs < 10.0,
            fmt("max error %.2e (tol 1e-3), %.2f s", worst, secs) + (misses.empty() ? "" : ", off:" + misses)};
}

Outcome best_response_suite() {
    const auto grid = uniform_grid(41);
    const std::vector<double> thetas{-1.0, -0.7, -0.3, -0.05, 0.05, 0.3, 0.7, 1.0};
    std::size_t full = 0, checked = 0, br_fail = 0, mono_fail = 0;
    for (const auto& inst : property_instances()) {
        const Game& g = inst.game;
        for (std::size_t i = 0; i < g.size(); ++i) {
            const auto opp = opponent_sum(g, inst.opponents, kUniform, i);
            const bool support = opp.has_full_support(g.weights()[static_cast<Eigen::Index>(i)]);
            full += support;
            for (double theta : thetas) {
                ++checked;
                if (support) {
                    const auto br = best_response(g, i, theta, opp, grid);
                    if (br.size() != 1 || br.front() != (theta > 0 ? 1.0 : -1.0)) ++br_fail;
                }
                const double dir = theta > 0 ? 1.0 : -1.0;
                for (std::size_t k = 1; k < grid.size(); ++k) {
                    const double a = interim_payoff(g, i, grid[k - 1], theta, opp);
                    const double b = interim_payoff(g, i, grid[k], theta, opp);
                    if (dir * (b - a) < -1e-15) {
                        ++mono_fail;
                        break;
                    }
                }
            }
        }
    }
    return {br_fail == 0 && mono_fail == 0 && full > 0,
            fmt("100 games, %zu (group, theta) cases; %zu groups with full support; best-response failures %zu, "
                "monotonicity failures %zu",
                checked, full, br_fail, mono_fail)};
}

Outcome gp_search() {
    const Stopwatch clock;
    std::size_t misses = 0, examined = 0;
    for (const auto& inst : property_instances()) {
        const Profile wta = Profile::symmetric(Rule::wta(), inst.game.size());
        const auto r = find_dominating_gp(inst.game, kUniform, wta);
        examined += r.examined;
        misses += !r.lambda.has_value();
    }
    std::mt19937_64 rng(5);
    std::size_t false_hits = 0;
    for (int t = 0; t < 20; ++t) {
        const std::size_t n = 3 + t % 2;
        const Game g = wvg::testing::random_game(rng, n, true);
        false_hits += find_dominating_gp(g, kUniform, Profile::symmetric(Rule::wta(), n)).lambda.has_value();
    }
    return {misses == 0 && false_hits == 0,
            fmt("no-dictator games without a dominating GP: %zu/100 (%zu candidates); dictator games with one: "
                "%zu/20; %.1f s",
                misses, examined, false_hits, clock.seconds())};
}

Outcome mixed_ordering() {
    bool decreasing = true;
    double prev = mixed_corr(0.0, kUniform);
    for (int k = 1; k <= 10; ++k) {
        const double c = mixed_corr(k / 10.0, kUniform);
        decreasing &= c < prev;
        prev = c;
    }
    const Game g = builtin_ec();
    const std::vector<double> shares{0.0, reference::kMixedShare, 0.5, 1.0};
    std::vector<Profile> profiles;
    for (double a : shares) profiles.push_back(Profile::symmetric(Rule::mixed(a), g.size()));
    const std::vector<std::pair<std::size_t, std::size_t>> contrasts{{0, 1}, {1, 2}, {2, 3}};
    McConfig cfg;
    cfg.samples = 10'000'000;
    const auto mc = estimate_many(g, profiles, contrasts, cfg);
    std::size_t bad = 0;
    std::string misses;
    for (std::size_t c = 0; c < contrasts.size(); ++c) {
        const auto& d = mc.differences[c];
        for (Eigen::Index i = 0; i < d.mean.size(); ++i) {
            if (d.mean[i] > 3.0 * d.standard_error[i]) continue;
            ++bad;
            misses += fmt(" %s a=%.3f/%.3f z=%.2f;", g.group(static_cast<std::size_t>(i)).name.c_str(),
                          shares[contrasts[c].first], shares[contrasts[c].second], d.mean[i] / d.standard_error[i]);
        }
    }
    return {decreasing && bad == 0, fmt("mixed_corr decreasing: %s; gaps not above 3 SE: %zu of %zu",
                                        decreasing ? "yes" : "no", bad, contrasts.size() * g.size()) +
                                        (misses.empty() ? "" : ":" + misses)};
}

Outcome convergence() {
    std::vector<double> rel;
    for (std::size_t n : {11u, 25u, 51u}) {
        const Game g = wvg::testing::make_game(std::vector<double>(n, 1.0));
        const Profile pr = Profile::symmetric(Rule::pr(), n);
        const double pi = conv_payoffs(g, pr, kUniform).mean[0];
        const double lim = symmetric_limit(Rule::pr(), kUniform, g)[0];
        rel.push_back(std::abs(std::sqrt(2.0 * M_PI * static_cast<double>(n)) * pi - lim) / lim);
    }
    const bool shrinking = rel[1] < rel[0] && rel[2] < rel[1] && rel[2] < 0.05;

    const Game ec = builtin_ec();
    const Vector wta = wta_exact_payoffs(ec, kUniform).mean;
    const Vector pr = conv_payoffs(ec, Profile::symmetric(Rule::pr(), ec.size()), kUniform).mean;
    const Vector ratio = wta.cwiseQuotient(pr);
    const bool in_band = ratio.minCoeff() >= 0.85 && ratio.maxCoeff() <= 0.91;
    return {shrinking && in_band, fmt("relative gaps n=11,25,51: %.4f %.4f %.4f; EC WTA/PR in [%.4f, %.4f]",
                                      rel[0], rel[1], rel[2], ratio.minCoeff(), ratio.maxCoeff())};
}

Outcome district_crossing() {
    const Game g = builtin_ec();
    const Vector cd = conv_payoffs(g, Profile::cd(g, reference::kDistrictShare), kUniform).mean;
    const Vector pr = conv_payoffs(g, Profile::symmetric(Rule::pr(), g.size()), kUniform).mean;
    const Vector wta = wta_exact_payoffs(g, kUniform).mean;
    std::size_t wrong_side = 0, below_wta = 0;
    double min_small = INFINITY, max_large = 0.0;
    for (Eigen::Index i = 0; i < cd.size(); ++i) {
        const double w = g.weights()[i], r = cd[i] / pr[i];
        if (w <= 16) {
            min_small = std::min(min_small, r);
            wrong_side += !(r > 1.0);
        }
        if (w >= 18) {
            max_large = std::max(max_large, r);
            wrong_side += !(r < 1.0);
        }
        below_wta += !(cd[i] > wta[i]);
    }
    const double w_star = cd_crossing(reference::kDistrictShare, Rule::pr(), kUniform, g).w_star;
    return {wrong_side == 0 && below_wta == 0 && w_star > 16.0 && w_star < 18.0,
            fmt("CD/PR min over EV<=16 %.4f, max over EV>=18 %.4f; w* = %.3f; states with CD <= WTA: %zu",
                min_small, max_large, w_star, below_wta)};
}

Outcome lorenz() {
    const Game g = builtin_ec();
    const Vector cd = conv_payoffs(g, Profile::cd(g, reference::kDistrictShare), kUniform).mean;
    const Vector pr = conv_payoffs(g, Profile::symmetric(Rule::pr(), g.size()), kUniform).mean;
    const Vector wta = wta_exact_payoffs(g, kUniform).mean;
    const auto vs_pr = lorenz_dominates(cd, pr), vs_wta = lorenz_dominates(cd, wta);

    // Limits B·w + C against A·w on synthetic weight draws: the ratio falls in w.
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::size_t moyes_fail = 0;
    for (int t = 0; t < 50; ++t) {
        const std::size_t n = 5 + static_cast<std::size_t>(t) * 3;
        std::vector<double> w(n);
        for (auto& x : w) x = 1.0 + std::floor(40.0 * u(rng) * u(rng));
        w[0] = 1.0;
        w[1] = 2.0;
        const Game s = wvg::testing::make_game(w);
        const double c = std::min(1.0, s.min_weight());
        const Vector f = cd_limit(c, kUniform, s).limits;
        const Vector h = symmetric_limit(Rule::pr(), kUniform, s);
        moyes_fail += lorenz_dominates(f, h) != LorenzOrder::Dominates || !(gini(f) < gini(h));
    }
    const bool pass = vs_pr == LorenzOrder::Dominates && vs_wta == LorenzOrder::Dominates && gini(cd) < gini(pr) &&
                      moyes_fail == 0;
    return {pass, fmt("CD vs PR: %s, CD vs WTA: %s; Gini CD %.4f, PR %.4f, WTA %.4f; synthetic failures %zu/50",
                      to_string(vs_pr).c_str(), to_string(vs_wta).c_str(), gini(cd), gini(pr), gini(wta),
                      moyes_fail)};
}

Outcome cross_validation() {
    std::mt19937_64 rng(7);
    double worst = 0.0, worst_z = 0.0;
    std::size_t mc_out = 0, exact_pairs = 0;
    for (int t = 0; t < 25; ++t) {
        const std::size_t n = 2 + t % 3;
        const Game g = wvg::testing::random_game(rng, n, n == 2);
        const Profile p = wvg::testing::random_profile(rng, g);
        const int m = n == 2 ? 2001 : n == 3 ? 401 : 171;
        const Vector conv = conv_payoffs(g, p, kUniform).mean;
        const Vector brute = bruteforce_payoffs(g, p, kUniform, m).mean;
        worst = std::max(worst, (conv - brute).cwiseAbs().maxCoeff());

        McConfig cfg;
        cfg.seed = 1000 + static_cast<std::uint64_t>(t);
        const auto mc = estimate_payoffs(g, p, cfg);
        for (Eigen::Index i = 0; i < conv.size(); ++i) {
            const double z = std::abs(mc.mean[i] - conv[i]) / mc.standard_error[i];
            worst_z = std::max(worst_z, z);
            mc_out += z > 3.0;
            worst = std::max(worst, std::abs(mc.mean[i] - conv[i]));
        }

        const Profile wta = Profile::symmetric(Rule::wta(), n);
        const Vector exact = wta_exact_payoffs(g, kUniform).mean;
        worst = std::max(worst, (conv_payoffs(g, wta, kUniform).mean - exact).cwiseAbs().maxCoeff());
        worst = std::max(worst, (bruteforce_payoffs(g, wta, kUniform, m).mean - exact).cwiseAbs().maxCoeff());
        ++exact_pairs;
    }
    return {worst <= 2e-3 && mc_out == 0,
            fmt("25 instances (+%zu WTA checks against the exact oracle): max pairwise gap %.2e (tol 2e-3); "
                "MC entries beyond 3 SE: %zu (largest %.2f SE)",
                exact_pairs, worst, mc_out, worst_z)};
}

struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
};

} // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> criteria{
        {1, "exact WTA column", exact_wta},
        {2, "MC tables at 1e8", mc_tables},
        {3, "Example 1 table", example1},
        {4, "best response and interim monotonicity", best_response_suite},
        {5, "GP domination search", gp_search},
        {6, "mixed-rule ordering", mixed_ordering},
        {7, "large-n convergence and WTA/PR band", convergence},
        {8, "district-rule crossing", district_crossing},
        {9, "Lorenz dominance", lorenz},
        {10, "oracle cross-validation", cross_validation},
    };
    std::set<int> only;
    for (int k = 1; k < argc; ++k) only.insert(std::stoi(argv[k]));

    int failed = 0;
    for (const auto& c : criteria) {
        if (!only.empty() && !only.count(c.id)) continue;
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("error: ") + e.what()};
        }
        failed += !o.pass;
        std::printf("%s %2d %s: %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str());
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
