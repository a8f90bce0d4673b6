#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "support.hpp"
#include "wvg/core.hpp"

using namespace wvg;
using wvg::testing::make_game;

namespace {

Vector vec(std::initializer_list<double> v) {
    Vector out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v) out[i++] = x;
    return out;
}

std::vector<Rule> builtin_rules() {
    return {Rule::wta(), Rule::pr(), Rule::zero(), Rule::mixed(0.0), Rule::mixed(0.25), Rule::mixed(1.0),
            Rule::cd(2, 3), Rule::cd(3, 3), Rule::cd(0.5, 55), Rule::gp(0.0), Rule::gp(0.4), Rule::gp(1.0),
            Rule::step({{0.0, 0.0}, {0.3, 0.5}, {0.8, 1.0}}), Rule::step({{0.0, 0.2}})};
}

std::vector<double> theta_grid() {
    std::vector<double> g;
    for (int k = -200; k <= 200; ++k) g.push_back(k / 200.0);
    g.push_back(0.3);
    g.push_back(std::nextafter(0.3, 1.0));
    std::sort(g.begin(), g.end());
    return g;
}

} // namespace

TEST(Rule, Examples) {
    EXPECT_EQ(eval_rule(Rule::wta(), 0.3), 1.0);
    EXPECT_NEAR(eval_rule(Rule::mixed(0.25), 0.2), 0.40, 1e-15);
    EXPECT_NEAR(eval_rule(Rule::cd(2, 3), 0.5), 2.5 / 3.0, 1e-15);
    EXPECT_EQ(eval_rule(Rule::wta(), 0.0), 0.0);
    EXPECT_EQ(eval_rule(Rule::pr(), -0.7), -0.7);
    EXPECT_EQ(eval_rule(Rule::gp(0.5), 0.5), 0.25);
    const auto s = Rule::step({{0.0, 0.1}, {0.5, 0.9}});
    EXPECT_EQ(s(0.5), 0.1);
    EXPECT_EQ(s(0.51), 0.9);
    EXPECT_EQ(s(-0.51), -0.9);
}

TEST(Rule, ParameterErrors) {
    EXPECT_THROW(Rule::mixed(-0.1), ConfigError);
    EXPECT_THROW(Rule::mixed(1.5), ConfigError);
    EXPECT_THROW(Rule::gp(1.01), ConfigError);
    EXPECT_THROW(Rule::gp(-0.1), ConfigError);
    EXPECT_THROW(Rule::cd(0.0, 3), ConfigError);
    EXPECT_THROW(Rule::cd(4.0, 3), ConfigError);
    EXPECT_THROW(Rule::step({}), ConfigError);
    EXPECT_THROW(Rule::step({{0.1, 0.5}}), ConfigError);
    EXPECT_THROW(Rule::step({{0.0, 0.6}, {0.5, 0.4}}), ConfigError);
    EXPECT_THROW(Rule::step({{0.0, 0.2}, {0.5, 1.2}}), ConfigError);
    EXPECT_THROW(eval_rule(Rule::pr(), 1.2), UsageError);
}

TEST(Rule, OddOnGrid) {
    for (const auto& r : builtin_rules())
        for (double t : theta_grid()) ASSERT_EQ(eval_rule(r, -t), -eval_rule(r, t)) << r.describe() << " " << t;
}

TEST(Rule, NonDecreasingAndBounded) {
    for (const auto& r : builtin_rules()) {
        double prev = -2.0;
        for (int k = -1000; k <= 1000; ++k) {
            const double v = eval_rule(r, k / 1000.0);
            ASSERT_GE(v, prev - 1e-15) << r.describe();
            ASSERT_LE(std::abs(v), 1.0 + 1e-15);
            prev = v;
        }
    }
}

TEST(Rule, RandomStepRulesAreOddAndMonotone) {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 200; ++t) {
        const Rule r = wvg::testing::random_step_rule(rng);
        double prev = -2.0;
        for (double th : theta_grid()) {
            ASSERT_EQ(r(-th), -r(th));
            if (th >= -1.0) {
                ASSERT_GE(r(th), prev) << r.describe();
                prev = r(th);
            }
        }
    }
}

TEST(Rule, VectorisedApplyMatchesScalar) {
    Eigen::ArrayXd theta = Eigen::ArrayXd::LinSpaced(101, -1.0, 1.0);
    for (const auto& r : builtin_rules()) {
        const Eigen::ArrayXd v = r.apply(theta);
        for (Eigen::Index k = 0; k < theta.size(); ++k) ASSERT_DOUBLE_EQ(v[k], r(theta[k])) << r.describe();
    }
}

TEST(Decide, Examples) {
    const auto never = []() -> int { ADD_FAILURE() << "unexpected tie"; return 1; };
    EXPECT_EQ(decide(make_game({29, 29, 3}), Profile::symmetric(Rule::wta(), 3), vec({0.1, -0.2, 0.9}), never), 1);
    EXPECT_EQ(decide(make_game({1, 2}), Profile::symmetric(Rule::pr(), 2), vec({0.9, -0.4}), never), 1);
    EXPECT_NEAR(weighted_sum(make_game({29, 29, 3}), Profile::symmetric(Rule::wta(), 3), vec({0.1, -0.2, 0.9})), 3.0, 0);
}

TEST(Decide, TieUsesCoin) {
    const Game g = make_game({1, 1});
    const Profile p = Profile::symmetric(Rule::wta(), 2);
    int calls = 0;
    EXPECT_EQ(decide(g, p, vec({0.4, -0.7}), [&] { ++calls; return -1; }), -1);
    EXPECT_EQ(decide(g, p, vec({0.4, -0.7}), [&] { ++calls; return 1; }), 1);
    EXPECT_EQ(calls, 2);

    RandomStream s(1, 1);
    int plus = 0;
    const int n = 20000;
    for (int k = 0; k < n; ++k) plus += decide(g, p, vec({0.4, -0.7}), [&] { return s.coin(); }) == 1;
    EXPECT_NEAR(plus / double(n), 0.5, 4.0 * 0.5 / std::sqrt(n));
}

TEST(Decide, DimensionMismatch) {
    const auto coin = [] { return 1; };
    EXPECT_THROW(decide(make_game({1, 2}), Profile::symmetric(Rule::pr(), 3), vec({0.1, 0.2}), coin), UsageError);
    EXPECT_THROW(decide(make_game({1, 2}), Profile::symmetric(Rule::pr(), 2), vec({0.1, 0.2, 0.3}), coin), UsageError);
}

TEST(Decide, Neutrality) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const auto coin = [] { return 1; };
    for (int t = 0; t < 300; ++t) {
        const std::size_t n = 2 + t % 5;
        const Game g = wvg::testing::random_game(rng, n, n < 3 || t % 3 == 0);
        const Profile p = wvg::testing::random_profile(rng, g);
        Vector theta(static_cast<Eigen::Index>(n));
        for (auto& x : theta) x = u(rng);
        if (weighted_sum(g, p, theta) == 0.0) continue;
        ASSERT_EQ(decide(g, p, -theta, coin), -decide(g, p, theta, coin));
    }
}

TEST(Game, Basics) {
    const Game g = make_game({29, 29, 3});
    EXPECT_EQ(g.size(), 3u);
    EXPECT_EQ(g.total_weight(), 61.0);
    EXPECT_FALSE(g.has_dictator());
    EXPECT_TRUE(make_game({5, 1, 1}).has_dictator());
    EXPECT_TRUE(make_game({2, 1, 1}).has_dictator());
    EXPECT_FALSE(g.has_populations());
    EXPECT_THROW(g.populations(), ConfigError);
    EXPECT_EQ(g.index_of("g2"), 1u);
    EXPECT_FALSE(g.index_of("nope").has_value());
    EXPECT_THROW(make_game({1, 0}), ConfigError);
    EXPECT_THROW(make_game({1, -2}), ConfigError);
    EXPECT_THROW(make_game({}), UsageError);
    EXPECT_THROW(Game({{"a", 1, {}}, {"a", 2, {}}}), ConfigError);
}

TEST(Profile, Construction) {
    const Game g = make_game({3, 5});
    const Profile cd = Profile::cd(g, 2);
    EXPECT_EQ(cd.rule(1).kind(), RuleKind::CD);
    EXPECT_NEAR(cd.rule(1)(0.5), (2 + 3 * 0.5) / 5.0, 1e-15);
    EXPECT_THROW(Profile::cd(g, 3.5), ConfigError);
    EXPECT_TRUE(Profile::symmetric(Rule::pr(), 4).is_symmetric());
    EXPECT_FALSE(cd.is_symmetric());
    EXPECT_THROW(Profile::gp(vec({0.5, 1.5})), ConfigError);
    EXPECT_THROW(Profile({}), UsageError);
}

TEST(Margins, Deterministic) {
    const auto d = MarginDistribution::uniform_iid();
    RandomStream a(4, 4), b(4, 4);
    EXPECT_EQ(sample_margins(d, 3, a), sample_margins(d, 3, b));
}

TEST(Margins, TwoAtomSupport) {
    const auto d = MarginDistribution::two_atom_iid(0.5);
    RandomStream s(4, 5);
    int plus = 0;
    for (int k = 0; k < 2000; ++k) {
        const Vector v = sample_margins(d, 5, s);
        for (double x : v) {
            ASSERT_TRUE(x == 0.5 || x == -0.5);
            plus += x > 0;
        }
    }
    EXPECT_NEAR(plus / 10000.0, 0.5, 0.02);
}

// ρ = 0 must leave the marginal law unchanged: two-sample Kolmogorov–Smirnov.
TEST(Margins, OneFactorZeroRhoMatchesIid) {
    const auto iid = MarginDistribution::uniform_iid();
    const auto f0 = MarginDistribution::one_factor(Marginal::uniform(), 0.0);
    RandomStream a(8, 1), b(8, 2);
    const int n = 20000;
    std::vector<double> x, y;
    for (int k = 0; k < n / 4; ++k) {
        for (double v : sample_margins(iid, 4, a)) x.push_back(v);
        for (double v : sample_margins(f0, 4, b)) y.push_back(v);
    }
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    double d = 0.0;
    std::size_t i = 0, j = 0;
    while (i < x.size() && j < y.size()) {
        if (x[i] <= y[j]) ++i; else ++j;
        d = std::max(d, std::abs(double(i) / x.size() - double(j) / y.size()));
    }
    // 1% critical value c(α)·√(2/n) with c = 1.63
    EXPECT_LT(d, 1.63 * std::sqrt(2.0 / n));
}

TEST(Margins, OneFactorCorrelates) {
    const auto d = MarginDistribution::one_factor(Marginal::uniform(), 0.6);
    RandomStream s(8, 3);
    double same = 0;
    const int n = 20000;
    for (int k = 0; k < n; ++k) {
        const Vector v = sample_margins(d, 2, s);
        same += (v[0] > 0) == (v[1] > 0);
        ASSERT_LE(v.cwiseAbs().maxCoeff(), 1.0);
    }
    EXPECT_GT(same / n, 0.6);
}

TEST(Moments, Examples) {
    auto m = moments(MarginDistribution::uniform_iid());
    EXPECT_DOUBLE_EQ(m.mean_abs, 0.5);
    EXPECT_NEAR(m.mean_sq, 1.0 / 3.0, 1e-15);
    m = moments(MarginDistribution::two_atom_iid(1.0));
    EXPECT_DOUBLE_EQ(m.mean_abs, 1.0);
    EXPECT_DOUBLE_EQ(m.mean_sq, 1.0);
    m = moments(MarginDistribution::two_atom_iid(0.5));
    EXPECT_DOUBLE_EQ(m.mean_abs, 0.5);
    EXPECT_DOUBLE_EQ(m.mean_sq, 0.25);
}

TEST(Moments, AbsDominatesSquare) {
    EXPECT_GT(moments(MarginDistribution::uniform_iid()).mean_abs, moments(MarginDistribution::uniform_iid()).mean_sq);
    for (double m : {0.1, 0.5, 0.9, 1.0}) {
        const auto mm = moments(MarginDistribution::two_atom_iid(m));
        EXPECT_GE(mm.mean_abs, mm.mean_sq);
    }
    const auto f = moments(MarginDistribution::one_factor(Marginal::uniform(), 0.5));
    EXPECT_GT(f.mean_abs, f.mean_sq);
}

TEST(Moments, OneFactorMatchesSampling) {
    const auto d = MarginDistribution::one_factor(Marginal::discrete({{-0.8, 1}, {-0.2, 2}, {0.2, 2}, {0.8, 1}}), 0.3);
    const auto m = moments(d);
    RandomStream s(2, 2);
    double a = 0, q = 0;
    const int n = 200000;
    for (int k = 0; k < n; ++k) {
        const double x = sample_margins(d, 1, s)[0];
        a += std::abs(x);
        q += x * x;
    }
    EXPECT_NEAR(a / n, m.mean_abs, 4e-3);
    EXPECT_NEAR(q / n, m.mean_sq, 4e-3);
}

// Independent midpoint-rule oracle for E[Θφ(Θ)] and E[φ²] under the uniform law.
TEST(Moments, RuleMomentsMatchMidpointRule) {
    for (const auto& r : builtin_rules()) {
        const int n = 400000;
        double cross = 0, sq = 0;
        for (int k = 0; k < n; ++k) {
            const double t = (k + 0.5) / n;
            cross += t * r(t);
            sq += r(t) * r(t);
        }
        const auto rm = rule_moments(r, Marginal::uniform());
        EXPECT_NEAR(rm.cross, cross / n, 1e-6) << r.describe();
        EXPECT_NEAR(rm.phi_sq, sq / n, 1e-6) << r.describe();
    }
    const auto rm = rule_moments(Rule::wta(), Marginal::two_atom(0.4));
    EXPECT_DOUBLE_EQ(rm.cross, 0.4);
    EXPECT_DOUBLE_EQ(rm.phi_sq, 1.0);
}

TEST(Marginal, Validation) {
    EXPECT_THROW(Marginal::two_atom(0.0), ConfigError);
    EXPECT_THROW(Marginal::two_atom(1.5), ConfigError);
    EXPECT_THROW(Marginal::discrete({{-0.5, 1}, {0.5, 2}}), ConfigError);
    EXPECT_THROW(Marginal::discrete({{-1.5, 1}, {1.5, 1}}), ConfigError);
    EXPECT_THROW(MarginDistribution::one_factor(Marginal::uniform(), 1.5), ConfigError);
}
