#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "wvg/cli.hpp"
#include "wvg/data.hpp"
#include "wvg/welfare.hpp"

namespace wvg::cli {

namespace {

std::string lower(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return {};
    return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

double number(const std::string& text, const std::string& context) {
    const std::string t = trim(text);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v))
        throw UsageError("cannot read a number from '" + text + "' in " + context);
    return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) parts.push_back(trim(cur));
    if (!s.empty() && s.back() == sep) parts.emplace_back();
    return parts;
}

/// Splits "head:tail" at the first colon.
std::pair<std::string, std::string> head_tail(const std::string& spec) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos) return {lower(trim(spec)), {}};
    return {lower(trim(spec.substr(0, colon))), trim(spec.substr(colon + 1))};
}

Marginal parse_marginal(const std::string& spec) {
    const auto [kind, arg] = head_tail(spec);
    if (kind == "uniform" && arg.empty()) return Marginal::uniform();
    if (kind == "two-atom") return Marginal::two_atom(number(arg, "two-atom"));
    if (kind == "discrete") {
        std::vector<Atom> atoms;
        for (const auto& item : split(arg, ';')) {
            const auto eq = item.find('=');
            if (eq == std::string::npos) throw UsageError("discrete atoms are written <value>=<probability>");
            const double v = number(item.substr(0, eq), "discrete value");
            const double p = number(item.substr(eq + 1), "discrete probability");
            if (v < 0.0) throw UsageError("list only the non-negative atoms; they are mirrored");
            if (v == 0.0) {
                atoms.push_back({0.0, p});
            } else {
                atoms.push_back({v, p / 2.0});
                atoms.push_back({-v, p / 2.0});
            }
        }
        return Marginal::discrete(std::move(atoms));
    }
    throw UsageError("unknown distribution '" + spec + "'");
}

} // namespace

Game parse_game(const std::string& spec) {
    const std::string key = lower(trim(spec));
    if (key == "ec") return builtin_ec();
    if (key == "flnywy") return builtin_fl_ny_wy();
    return load_weights(spec);
}

MarginDistribution parse_distribution(const std::string& spec) {
    const auto [kind, arg] = head_tail(spec);
    if (kind == "one-factor") {
        const auto colon = arg.find(':');
        const double rho = number(arg.substr(0, colon), "one-factor");
        const Marginal base = colon == std::string::npos ? Marginal::uniform() : parse_marginal(arg.substr(colon + 1));
        return MarginDistribution::one_factor(base, rho);
    }
    return MarginDistribution::iid(parse_marginal(spec));
}

Rule parse_rule(const std::string& spec, double weight) {
    const auto [kind, arg] = head_tail(spec);
    if (kind == "wta" && arg.empty()) return Rule::wta();
    if (kind == "pr" && arg.empty()) return Rule::pr();
    if (kind == "zero" && arg.empty()) return Rule::zero();
    if (kind == "mixed") return Rule::mixed(number(arg, "mixed"));
    if (kind == "cd") return Rule::cd(number(arg, "cd"), weight);
    if (kind == "gp") return Rule::gp(number(arg, "gp"));
    if (kind == "step") {
        std::vector<StepLevel> levels;
        for (const auto& item : split(arg, ';')) {
            const auto eq = item.find('=');
            if (eq == std::string::npos) throw UsageError("step levels are written <threshold>=<value>");
            levels.push_back({number(item.substr(0, eq), "step threshold"), number(item.substr(eq + 1), "step value")});
        }
        return Rule::step(std::move(levels));
    }
    throw UsageError("unknown rule '" + spec + "'");
}

Profile parse_profile(const std::string& spec, const Game& game) {
    const auto [kind, arg] = head_tail(spec);
    const std::size_t n = game.size();
    if (kind == "cd") return Profile::cd(game, number(arg, "cd"));
    if (kind == "gp") {
        const std::string scheme = lower(arg);
        if (scheme == "equalizing") return gp_profile(game, GpScheme::Equalizing);
        if (scheme == "popular") return gp_profile(game, GpScheme::Popular);
        const auto parts = split(arg, ',');
        if (parts.size() == 1) return Profile::symmetric(Rule::gp(number(parts[0], "gp")), n);
        Vector lambda(static_cast<Eigen::Index>(parts.size()));
        for (std::size_t k = 0; k < parts.size(); ++k) lambda[static_cast<Eigen::Index>(k)] = number(parts[k], "gp");
        return gp_profile(game, GpScheme::Coefficients, lambda);
    }
    if (kind == "per-group") {
        std::ifstream in(arg);
        if (!in) throw UsageError("cannot open profile file '" + arg + "'");
        std::vector<std::optional<Rule>> rules(n);
        std::string line;
        std::size_t number_of_line = 0;
        bool header = false;
        while (std::getline(in, line)) {
            ++number_of_line;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (trim(line).empty()) continue;
            const auto fields = split_csv_record(line, number_of_line);
            if (!header) {
                if (fields.size() != 2 || lower(trim(fields[0])) != "name" || lower(trim(fields[1])) != "rule")
                    throw ParseError("expected header 'name,rule'", number_of_line);
                header = true;
                continue;
            }
            if (fields.size() != 2) throw ParseError("expected 2 fields", number_of_line);
            const auto idx = game.index_of(trim(fields[0]));
            if (!idx) throw ParseError("unknown group '" + trim(fields[0]) + "'", number_of_line);
            if (rules[*idx]) throw ParseError("group '" + trim(fields[0]) + "' listed twice", number_of_line);
            rules[*idx] = parse_rule(fields[1], game.weights()[static_cast<Eigen::Index>(*idx)]);
        }
        std::vector<Rule> out;
        for (std::size_t i = 0; i < n; ++i) {
            if (!rules[i]) throw ConfigError("profile file has no rule for group '" + game.group(i).name + "'");
            out.push_back(*rules[i]);
        }
        return Profile(std::move(out));
    }
    return Profile::symmetric(parse_rule(spec, 0.0), n);
}

std::uint64_t parse_count(const std::string& text) {
    const double v = number(text, "count");
    if (!(v >= 1.0) || v != std::floor(v) || v > 1e18) throw UsageError("expected a positive integer, got '" + text + "'");
    return static_cast<std::uint64_t>(v);
}

std::optional<Method> parse_method(const std::string& text) {
    const std::string m = lower(trim(text));
    if (m == "auto") return std::nullopt;
    if (m == "mc") return Method::MonteCarlo;
    if (m == "wta-exact") return Method::WtaExact;
    if (m == "conv") return Method::Convolution;
    if (m == "brute") return Method::BruteForce;
    if (m == "asymptotic") return Method::Asymptotic;
    throw UsageError("unknown method '" + text + "'");
}

} // namespace wvg::cli
