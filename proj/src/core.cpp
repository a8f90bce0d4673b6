#include "wvg/core.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <unordered_set>

namespace wvg {

namespace {

std::string format_number(double x) {
    std::ostringstream os;
    os << std::setprecision(10) << x;
    return os.str();
}

void require_unit_interval(double x, const char* what) {
    if (!(x >= 0.0 && x <= 1.0))
        throw ConfigError(std::string(what) + " must lie in [0,1], got " + format_number(x));
}

} // namespace

// ---------------------------------------------------------------- Game

Game::Game(std::vector<GroupSpec> groups) : groups_(std::move(groups)) {
    if (groups_.empty()) throw UsageError("a game needs at least one group");
    std::unordered_set<std::string> seen;
    weights_.resize(static_cast<Eigen::Index>(groups_.size()));
    for (std::size_t i = 0; i < groups_.size(); ++i) {
        const auto& g = groups_[i];
        if (!(g.weight > 0.0) || !std::isfinite(g.weight))
            throw ConfigError("group '" + g.name + "' has non-positive weight " + format_number(g.weight));
        if (g.population && !(*g.population > 0.0))
            throw ConfigError("group '" + g.name + "' has non-positive population");
        if (!seen.insert(g.name).second) throw ConfigError("duplicate group name '" + g.name + "'");
        weights_[static_cast<Eigen::Index>(i)] = g.weight;
    }
    total_ = weights_.sum();
}

bool Game::has_dictator() const noexcept { return 2.0 * max_weight() >= total_; }

bool Game::has_populations() const noexcept {
    return std::all_of(groups_.begin(), groups_.end(), [](const GroupSpec& g) { return g.population.has_value(); });
}

Vector Game::populations() const {
    if (!has_populations()) throw ConfigError("game has no population data");
    Vector p(static_cast<Eigen::Index>(groups_.size()));
    for (std::size_t i = 0; i < groups_.size(); ++i) p[static_cast<Eigen::Index>(i)] = *groups_[i].population;
    return p;
}

std::optional<std::size_t> Game::index_of(const std::string& name) const {
    for (std::size_t i = 0; i < groups_.size(); ++i)
        if (groups_[i].name == name) return i;
    return std::nullopt;
}

// ---------------------------------------------------------------- Rule

Rule::Rule(RuleKind kind, double param, std::vector<AffinePiece> pieces)
    : kind_(kind), param_(param), pieces_(std::move(pieces)) {}

Rule Rule::wta() { return Rule(RuleKind::WTA, 0.0, {{0.0, 1.0, 1.0, 0.0}}); }
Rule Rule::pr() { return Rule(RuleKind::PR, 0.0, {{0.0, 1.0, 0.0, 1.0}}); }
Rule Rule::zero() { return Rule(RuleKind::Zero, 0.0, {{0.0, 1.0, 0.0, 0.0}}); }

Rule Rule::mixed(double a) {
    require_unit_interval(a, "mixed-rule share a");
    return Rule(RuleKind::Mixed, a, {{0.0, 1.0, a, 1.0 - a}});
}

Rule Rule::cd(double c, double weight) {
    if (!(weight > 0.0)) throw ConfigError("CD rule needs a positive group weight");
    if (!(c > 0.0 && c <= weight))
        throw ConfigError("CD amount c must lie in (0, w], got c=" + format_number(c) + " w=" + format_number(weight));
    Rule r(RuleKind::CD, c, {{0.0, 1.0, c / weight, (weight - c) / weight}});
    r.cd_weight_ = weight;
    return r;
}

Rule Rule::gp(double lambda) {
    require_unit_interval(lambda, "GP coefficient");
    return Rule(RuleKind::GP, lambda, {{0.0, 1.0, 0.0, lambda}});
}

Rule Rule::step(std::vector<StepLevel> levels) {
    if (levels.empty()) throw ConfigError("step rule needs at least one level");
    if (levels.front().threshold != 0.0) throw ConfigError("step rule must start at threshold 0");
    std::vector<AffinePiece> pieces;
    for (std::size_t k = 0; k < levels.size(); ++k) {
        const auto& lv = levels[k];
        require_unit_interval(lv.value, "step value");
        if (k > 0) {
            if (!(lv.threshold > levels[k - 1].threshold) || !(lv.threshold < 1.0))
                throw ConfigError("step thresholds must be strictly increasing in [0,1)");
            if (lv.value < levels[k - 1].value) throw ConfigError("step values must be non-decreasing");
        }
        const double hi = (k + 1 < levels.size()) ? levels[k + 1].threshold : 1.0;
        pieces.push_back({lv.threshold, hi, lv.value, 0.0});
    }
    Rule r(RuleKind::Step, 0.0, std::move(pieces));
    r.levels_ = std::move(levels);
    return r;
}

double Rule::operator()(double theta) const noexcept {
    if (theta == 0.0) return 0.0;
    const double t = std::abs(theta);
    // Pieces are left-open: θ on a threshold takes the lower level.
    auto it = std::lower_bound(pieces_.begin(), pieces_.end(), t,
                               [](const AffinePiece& p, double x) { return p.hi < x; });
    if (it == pieces_.end()) it = std::prev(pieces_.end());
    const double v = it->intercept + it->slope * t;
    return theta > 0.0 ? v : -v;
}

double Rule::sup_abs() const noexcept {
    const auto& p = pieces_.back();
    return std::abs(p.intercept + p.slope * p.hi);
}

std::vector<double> Rule::breakpoints() const {
    std::vector<double> b;
    for (std::size_t k = 1; k < pieces_.size(); ++k) b.push_back(pieces_[k].lo);
    return b;
}

std::string Rule::describe() const {
    switch (kind_) {
        case RuleKind::WTA: return "wta";
        case RuleKind::PR: return "pr";
        case RuleKind::Zero: return "zero";
        case RuleKind::Mixed: return "mixed:" + format_number(param_);
        case RuleKind::CD: return "cd:" + format_number(param_);
        case RuleKind::GP: return "gp:" + format_number(param_);
        case RuleKind::Step: {
            std::string s = "step:";
            for (std::size_t k = 0; k < levels_.size(); ++k) {
                if (k) s += ';';
                s += format_number(levels_[k].threshold) + '=' + format_number(levels_[k].value);
            }
            return s;
        }
    }
    return "?";
}

double eval_rule(const Rule& rule, double theta) {
    if (!(theta >= -1.0 && theta <= 1.0)) throw UsageError("vote margin outside [-1,1]: " + format_number(theta));
    return rule(theta);
}

// ---------------------------------------------------------------- Profile

Profile::Profile(std::vector<Rule> rules) : rules_(std::move(rules)) {
    if (rules_.empty()) throw UsageError("a profile needs at least one rule");
}

Profile Profile::symmetric(const Rule& rule, std::size_t n) { return Profile(std::vector<Rule>(n, rule)); }

Profile Profile::cd(const Game& game, double c) {
    if (!(c > 0.0 && c <= game.min_weight()))
        throw ConfigError("CD amount c must lie in (0, min weight = " + format_number(game.min_weight()) + "]");
    std::vector<Rule> rules;
    rules.reserve(game.size());
    for (const auto& g : game.groups()) rules.push_back(Rule::cd(c, g.weight));
    return Profile(std::move(rules));
}

Profile Profile::gp(const Vector& lambda) {
    std::vector<Rule> rules;
    rules.reserve(static_cast<std::size_t>(lambda.size()));
    for (double l : lambda) rules.push_back(Rule::gp(l));
    return Profile(std::move(rules));
}

bool Profile::is_symmetric() const noexcept {
    return std::all_of(rules_.begin(), rules_.end(), [&](const Rule& r) { return r.same_function(rules_.front()); });
}

// ---------------------------------------------------------------- decisions

double weighted_sum(const Game& game, const Profile& profile, const Vector& theta) {
    if (profile.size() != game.size() || static_cast<std::size_t>(theta.size()) != game.size())
        throw UsageError("dimension mismatch between game, profile and margin vector");
    double s = 0.0;
    for (std::size_t i = 0; i < game.size(); ++i) {
        const auto k = static_cast<Eigen::Index>(i);
        s += game.weights()[k] * eval_rule(profile.rule(i), theta[k]);
    }
    return s;
}

int decide(const Game& game, const Profile& profile, const Vector& theta, const std::function<int()>& tie_draw) {
    const double s = weighted_sum(game, profile, theta);
    if (s > 0.0) return 1;
    if (s < 0.0) return -1;
    return tie_draw() > 0 ? 1 : -1;
}

// ---------------------------------------------------------------- distributions

Marginal Marginal::uniform() { return Marginal{}; }

Marginal Marginal::two_atom(double m) {
    if (!(m > 0.0 && m <= 1.0)) throw ConfigError("two-atom margin m must lie in (0,1]");
    return discrete({{-m, 0.5}, {m, 0.5}});
}

Marginal Marginal::discrete(std::vector<Atom> atoms) {
    if (atoms.empty()) throw ConfigError("discrete marginal needs atoms");
    std::sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) { return a.value < b.value; });
    double total = 0.0;
    for (const auto& a : atoms) {
        if (!(a.value >= -1.0 && a.value <= 1.0)) throw ConfigError("atom outside [-1,1]");
        if (!(a.probability >= 0.0)) throw ConfigError("negative atom probability");
        total += a.probability;
    }
    if (!(total > 0.0)) throw ConfigError("atom probabilities sum to zero");
    for (std::size_t k = 0; k < atoms.size(); ++k) {
        const auto& lo = atoms[k];
        const auto& hi = atoms[atoms.size() - 1 - k];
        if (std::abs(lo.value + hi.value) > 1e-12 || std::abs(lo.probability - hi.probability) > 1e-12 * total)
            throw ConfigError("discrete marginal must be symmetric about 0");
    }
    Marginal m;
    double acc = 0.0;
    for (auto& a : atoms) {
        a.probability /= total;
        acc += a.probability;
        m.cdf_.push_back(acc);
    }
    m.cdf_.back() = 1.0;
    m.atoms_ = std::move(atoms);
    return m;
}

double Marginal::sample(RandomStream& stream) const noexcept {
    if (atoms_.empty()) return stream.uniform_pm1();
    const double u = stream.uniform01();
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    const auto k = static_cast<std::size_t>(std::min<std::ptrdiff_t>(it - cdf_.begin(), static_cast<std::ptrdiff_t>(atoms_.size()) - 1));
    return atoms_[k].value;
}

std::string Marginal::describe() const {
    if (atoms_.empty()) return "uniform";
    if (atoms_.size() == 2) return "two-atom:" + format_number(atoms_.back().value);
    return "discrete(" + std::to_string(atoms_.size()) + " atoms)";
}

MarginDistribution::MarginDistribution(Marginal marginal, double rho, bool one_factor)
    : marginal_(std::move(marginal)), rho_(rho), one_factor_(one_factor) {}

MarginDistribution MarginDistribution::uniform_iid() { return iid(Marginal::uniform()); }
MarginDistribution MarginDistribution::two_atom_iid(double m) { return iid(Marginal::two_atom(m)); }
MarginDistribution MarginDistribution::discrete_iid(std::vector<Atom> atoms) {
    return iid(Marginal::discrete(std::move(atoms)));
}
MarginDistribution MarginDistribution::iid(Marginal marginal) { return {std::move(marginal), 0.0, false}; }

MarginDistribution MarginDistribution::one_factor(Marginal marginal, double rho) {
    require_unit_interval(rho, "one-factor mixing weight rho");
    return {std::move(marginal), rho, true};
}

std::string MarginDistribution::describe() const {
    if (!one_factor_) return marginal_.describe();
    return "one-factor:" + format_number(rho_) + ":" + marginal_.describe();
}

void MarginDistribution::sample(Eigen::Ref<Vector> out, RandomStream& stream) const noexcept {
    if (!one_factor_) {
        if (marginal_.is_uniform() && out.innerStride() == 1) {
            stream.fill_uniform_pm1(out.data(), static_cast<std::size_t>(out.size()));
            return;
        }
        for (Eigen::Index i = 0; i < out.size(); ++i) out[i] = marginal_.sample(stream);
        return;
    }
    const double s = stream.coin();
    for (Eigen::Index i = 0; i < out.size(); ++i) {
        const double z = marginal_.sample(stream);
        out[i] = std::clamp(rho_ * s * std::abs(z) + (1.0 - rho_) * z, -1.0, 1.0);
    }
}

Vector sample_margins(const MarginDistribution& dist, std::size_t n, RandomStream& stream) {
    if (n == 0) throw UsageError("sample_margins needs n >= 1");
    Vector out(static_cast<Eigen::Index>(n));
    dist.sample(out, stream);
    return out;
}

namespace {

DistributionMoments marginal_moments(const Marginal& m) {
    if (m.is_uniform()) return {0.5, 1.0 / 3.0};
    DistributionMoments r;
    for (const auto& a : m.atoms()) {
        r.mean_abs += a.probability * std::abs(a.value);
        r.mean_sq += a.probability * a.value * a.value;
    }
    return r;
}

} // namespace

DistributionMoments moments(const MarginDistribution& dist) {
    const auto z = marginal_moments(dist.marginal());
    if (!dist.is_one_factor()) return z;
    // |Θ| = |Z| when sgn Z agrees with S, |1-2ρ|·|Z| otherwise, each with probability ½.
    const double shrink = 1.0 - 2.0 * dist.rho();
    return {z.mean_abs * (1.0 + std::abs(shrink)) / 2.0, z.mean_sq * (1.0 + shrink * shrink) / 2.0};
}

RuleMoments rule_moments(const Rule& rule, const Marginal& marginal) {
    RuleMoments r;
    if (marginal.is_uniform()) {
        // Density ½ on [-1,1]; both integrands are even, so integrate over (0,1].
        for (const auto& p : rule.pieces()) {
            const double d1 = p.hi - p.lo;
            const double d2 = p.hi * p.hi - p.lo * p.lo;
            const double d3 = p.hi * p.hi * p.hi - p.lo * p.lo * p.lo;
            r.cross += p.intercept * d2 / 2.0 + p.slope * d3 / 3.0;
            r.phi_sq += p.intercept * p.intercept * d1 + p.intercept * p.slope * d2 + p.slope * p.slope * d3 / 3.0;
        }
        return r;
    }
    for (const auto& a : marginal.atoms()) {
        const double v = rule(a.value);
        r.cross += a.probability * a.value * v;
        r.phi_sq += a.probability * v * v;
    }
    return r;
}

} // namespace wvg
