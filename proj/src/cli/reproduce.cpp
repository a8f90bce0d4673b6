#include "wvg/reproduce.hpp"

#include <cmath>
#include <map>

#include "wvg/data.hpp"
#include "wvg/oracle.hpp"
#include "wvg/reference.hpp"
#include "wvg/welfare.hpp"

namespace wvg {

std::vector<Profile> ec_profiles(const Game& game) {
    const std::size_t n = game.size();
    return {Profile::symmetric(Rule::wta(), n), Profile::symmetric(Rule::pr(), n),
            Profile::symmetric(Rule::mixed(reference::kMixedShare), n), Profile::cd(game, reference::kDistrictShare)};
}

EcTables reproduce_ec(Method method, const McConfig& cfg) {
    const Game game = builtin_ec();
    const auto profiles = ec_profiles(game);
    const auto n = static_cast<Eigen::Index>(game.size());

    // Per-state means and SEs of the four profiles, plus (for MC) the
    // per-state SE of each ratio's linearised numerator X - r·Y.
    std::array<Vector, 4> mean, se;
    EcTables out;
    out.method = method;
    McResult mc;
    if (method == Method::MonteCarlo) {
        const std::vector<std::pair<std::size_t, std::size_t>> contrasts{{0, 1}, {2, 1}, {3, 1}, {3, 0}};
        mc = estimate_many(game, profiles, contrasts, cfg);
        for (std::size_t k = 0; k < 4; ++k) {
            mean[k] = mc.payoffs[k].mean;
            se[k] = mc.payoffs[k].standard_error;
        }
        out.samples = cfg.samples;
    } else if (method == Method::Convolution) {
        for (std::size_t k = 0; k < 4; ++k) {
            mean[k] = conv_payoffs(game, profiles[k], MarginDistribution::uniform_iid()).mean;
            se[k] = Vector::Zero(n);
        }
    } else {
        throw UsageError("table reproduction supports the mc and conv methods");
    }

    std::map<double, std::vector<Eigen::Index>> classes;
    for (Eigen::Index i = 0; i < n; ++i) classes[game.weights()[i]].push_back(i);

    const auto refs = reference::ec_payoffs();
    const auto ratio_refs = reference::ec_ratios();
    const std::array<std::pair<std::size_t, std::size_t>, 4> ratio_of{{{0, 1}, {2, 1}, {3, 1}, {3, 0}}};
    std::size_t r = 0;
    for (const auto& [votes, members] : classes) {
        ClassRow pay, rat;
        pay.votes = rat.votes = votes;
        pay.states = rat.states = static_cast<int>(members.size());
        const double m = static_cast<double>(members.size());
        for (std::size_t k = 0; k < 4; ++k) {
            double s = 0.0, v = 0.0;
            for (auto i : members) {
                s += mean[k][i];
                v += se[k][i] * se[k][i];
            }
            pay.value[k] = s / m;
            // States of a class share draws, so this treats them as independent: a floor, not a bound.
            pay.standard_error[k] = std::sqrt(v) / m;
        }
        for (std::size_t k = 0; k < 4; ++k) {
            const auto [a, b] = ratio_of[k];
            rat.value[k] = pay.value[a] / pay.value[b];
            if (method == Method::MonteCarlo) {
                // Var(X - rY) = Var(X) + r²Var(Y) - 2r Cov(X,Y); Cov from Var(X - Y).
                double v = 0.0;
                const double ratio = rat.value[k];
                for (auto i : members) {
                    const double vx = se[a][i] * se[a][i], vy = se[b][i] * se[b][i];
                    const double vd = mc.differences[k].standard_error[i] * mc.differences[k].standard_error[i];
                    const double cov = 0.5 * (vx + vy - vd);
                    v += vx + ratio * ratio * vy - 2.0 * ratio * cov;
                }
                rat.standard_error[k] = std::sqrt(std::max(v, 0.0)) / m / pay.value[b];
            }
        }
        if (r < refs.size() && refs[r].votes == static_cast<int>(votes)) {
            pay.reference = {refs[r].wta, refs[r].pr, refs[r].mixed, refs[r].cd};
            rat.reference = {ratio_refs[r].wta_pr, ratio_refs[r].mixed_pr, ratio_refs[r].cd_pr, ratio_refs[r].cd_wta};
        } else {
            pay.reference.fill(std::nan(""));
            rat.reference.fill(std::nan(""));
        }
        out.payoffs.push_back(pay);
        out.ratios.push_back(rat);
        ++r;
    }
    return out;
}

Example1Table reproduce_example1() {
    const Game game = builtin_fl_ny_wy();
    const auto dist = MarginDistribution::uniform_iid();
    const std::array<Profile, 4> profiles{Profile::symmetric(Rule::wta(), 3), Profile::symmetric(Rule::pr(), 3),
                                          gp_profile(game, GpScheme::Popular), gp_profile(game, GpScheme::Equalizing)};
    const Vector pop = game.populations();
    Example1Table t;
    const auto refs = reference::example1();
    for (std::size_t k = 0; k < 4; ++k) {
        const Vector pay = conv_payoffs(game, profiles[k], dist).mean;
        for (std::size_t i = 0; i < 3; ++i) t.value[i][k] = pay[static_cast<Eigen::Index>(i)];
        t.value[3][k] = pop.dot(pay) / pop.sum();
    }
    for (std::size_t i = 0; i < 4; ++i) {
        t.rows[i] = std::string(refs[i].name);
        t.reference[i] = {refs[i].wta, refs[i].pr, refs[i].pop, refs[i].gp};
    }
    return t;
}

} // namespace wvg
