#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "wvg/error.hpp"
#include "wvg/random.hpp"

namespace wvg {

using Vector = Eigen::VectorXd;

struct GroupSpec {
    std::string name;
    double weight = 1.0;
    /// Thousands of persons.
    std::optional<double> population;

    bool operator==(const GroupSpec&) const = default;
};

/// An ordered society of groups with positive voting weights.
class Game {
public:
    explicit Game(std::vector<GroupSpec> groups);

    std::size_t size() const noexcept { return groups_.size(); }
    const GroupSpec& group(std::size_t i) const { return groups_.at(i); }
    const std::vector<GroupSpec>& groups() const noexcept { return groups_; }
    const Vector& weights() const noexcept { return weights_; }
    double total_weight() const noexcept { return total_; }
    double min_weight() const noexcept { return weights_.minCoeff(); }
    double max_weight() const noexcept { return weights_.maxCoeff(); }

    /// Some group holds at least half the total weight.
    bool has_dictator() const noexcept;
    bool has_populations() const noexcept;
    /// Throws ConfigError when any population is missing.
    Vector populations() const;
    std::optional<std::size_t> index_of(const std::string& name) const;

    bool operator==(const Game& other) const { return groups_ == other.groups_; }

private:
    std::vector<GroupSpec> groups_;
    Vector weights_;
    double total_ = 0.0;
};

enum class RuleKind { WTA, PR, Mixed, CD, GP, Step, Zero };

/// One level of a step rule: φ(θ) = value for θ in (threshold, next threshold].
struct StepLevel {
    double threshold = 0.0;
    double value = 0.0;

    bool operator==(const StepLevel&) const = default;
};

/// φ(θ) = intercept + slope·θ on (lo, hi] ⊆ (0,1]; mirrored oddly for θ < 0.
struct AffinePiece {
    double lo = 0.0;
    double hi = 1.0;
    double intercept = 0.0;
    double slope = 0.0;

    bool operator==(const AffinePiece&) const = default;
};

/// A group's map from vote margin θ ∈ [-1,1] to weight margin in [-1,1].
///
/// Every rule is odd and non-decreasing and is stored as a list of affine
/// pieces on (0,1]; evaluation, moments and lattice projection all work
/// from that representation. sgn(0) is 0, so every rule maps 0 to 0.
class Rule {
public:
    Rule() = default;

    static Rule wta();
    static Rule pr();
    static Rule zero();
    static Rule mixed(double a);
    /// Congressional-district rule for a group of weight `weight`:
    /// c votes by winner-take-all, the remaining weight - c proportionally.
    static Rule cd(double c, double weight);
    static Rule gp(double lambda);
    /// Levels must start at threshold 0, have strictly increasing thresholds
    /// in [0,1) and non-decreasing values in [0,1].
    static Rule step(std::vector<StepLevel> levels);

    RuleKind kind() const noexcept { return kind_; }
    /// a for Mixed, c for CD, λ for GP; 0 otherwise.
    double parameter() const noexcept { return param_; }
    /// Group weight a CD rule was built for; 0 otherwise.
    double cd_weight() const noexcept { return cd_weight_; }
    const std::vector<StepLevel>& levels() const noexcept { return levels_; }
    const std::vector<AffinePiece>& pieces() const noexcept { return pieces_; }

    double operator()(double theta) const noexcept;

    /// Coefficient-wise evaluation; single-piece rules stay vectorised.
    template <typename Derived>
    Eigen::ArrayXd apply(const Eigen::ArrayBase<Derived>& theta) const {
        if (pieces_.size() == 1) {
            const auto& p = pieces_.front();
            return p.intercept * theta.sign() + p.slope * theta;
        }
        return theta.unaryExpr([this](double t) { return (*this)(t); }).eval();
    }

    /// sup over θ of |φ(θ)|.
    double sup_abs() const noexcept;
    /// Interior piece boundaries in (0,1), ascending.
    std::vector<double> breakpoints() const;
    /// Same function of θ (compares the piece representation).
    bool same_function(const Rule& other) const noexcept { return pieces_ == other.pieces_; }
    std::string describe() const;

private:
    Rule(RuleKind kind, double param, std::vector<AffinePiece> pieces);

    RuleKind kind_ = RuleKind::Zero;
    double param_ = 0.0;
    double cd_weight_ = 0.0;
    std::vector<StepLevel> levels_;
    std::vector<AffinePiece> pieces_{AffinePiece{0.0, 1.0, 0.0, 0.0}};
};

/// Rule evaluation with range checking; throws UsageError for θ outside [-1,1].
double eval_rule(const Rule& rule, double theta);

/// One rule per group, aligned with Game::groups().
class Profile {
public:
    explicit Profile(std::vector<Rule> rules);

    static Profile symmetric(const Rule& rule, std::size_t n);
    /// CD profile; c must lie in (0, min weight].
    static Profile cd(const Game& game, double c);
    /// Generalised proportional profile φ_i(θ) = λ_i θ (λ used as given).
    static Profile gp(const Vector& lambda);

    std::size_t size() const noexcept { return rules_.size(); }
    const Rule& rule(std::size_t i) const { return rules_.at(i); }
    const std::vector<Rule>& rules() const noexcept { return rules_; }
    bool is_symmetric() const noexcept;

private:
    std::vector<Rule> rules_;
};

/// Σ_i w_i φ_i(θ_i).
double weighted_sum(const Game& game, const Profile& profile, const Vector& theta);

/// sgn Σ_i w_i φ_i(θ_i); an exact zero is resolved by `tie_draw` (must return ±1).
int decide(const Game& game, const Profile& profile, const Vector& theta,
           const std::function<int()>& tie_draw);

struct Atom {
    double value = 0.0;
    double probability = 0.0;
};

/// Law of a single margin: uniform on [-1,1] or a finite symmetric pmf.
class Marginal {
public:
    static Marginal uniform();
    static Marginal two_atom(double m);
    /// Atoms must be symmetric about 0 (equal mass at ±v) and lie in [-1,1];
    /// probabilities are normalised to sum to 1.
    static Marginal discrete(std::vector<Atom> atoms);

    bool is_uniform() const noexcept { return atoms_.empty(); }
    /// Sorted ascending; empty for the uniform law.
    const std::vector<Atom>& atoms() const noexcept { return atoms_; }

    double sample(RandomStream& stream) const noexcept;
    std::string describe() const;

private:
    std::vector<Atom> atoms_;
    std::vector<double> cdf_;
};

/// Joint law of the margin vector Θ.
///
/// Either iid draws from a symmetric marginal, or a one-factor variant:
/// a common sign S = ±1 and Θ_i = ρ·S·|Z_i| + (1-ρ)·Z_i with Z_i iid.
class MarginDistribution {
public:
    static MarginDistribution uniform_iid();
    static MarginDistribution two_atom_iid(double m);
    static MarginDistribution discrete_iid(std::vector<Atom> atoms);
    static MarginDistribution iid(Marginal marginal);
    static MarginDistribution one_factor(Marginal marginal, double rho);

    const Marginal& marginal() const noexcept { return marginal_; }
    double rho() const noexcept { return rho_; }
    bool is_iid() const noexcept { return rho_ == 0.0; }
    bool is_one_factor() const noexcept { return one_factor_; }
    std::string describe() const;

    /// Fills `out` with one draw of the margin vector.
    void sample(Eigen::Ref<Vector> out, RandomStream& stream) const noexcept;

private:
    MarginDistribution(Marginal marginal, double rho, bool one_factor);

    Marginal marginal_;
    double rho_ = 0.0;
    bool one_factor_ = false;
};

struct DistributionMoments {
    double mean_abs = 0.0;  ///< E|Θ|
    double mean_sq = 0.0;   ///< E[Θ²]
};

Vector sample_margins(const MarginDistribution& dist, std::size_t n, RandomStream& stream);

/// Marginal moments of a single component Θ_i.
DistributionMoments moments(const MarginDistribution& dist);

/// Moments of the rule under the marginal: E[Θφ(Θ)] and E[φ(Θ)²].
struct RuleMoments {
    double cross = 0.0;
    double phi_sq = 0.0;
};
RuleMoments rule_moments(const Rule& rule, const Marginal& marginal);

} // namespace wvg
