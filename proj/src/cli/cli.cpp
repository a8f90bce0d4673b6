#include "wvg/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>

#include "wvg/asymptotics.hpp"
#include "wvg/data.hpp"
#include "wvg/oracle.hpp"
#include "wvg/reproduce.hpp"
#include "wvg/welfare.hpp"

namespace wvg::cli {

namespace {

struct Common {
    std::string game = "ec";
    std::string dist = "uniform";
    std::string method = "auto";
    std::string samples = "1e7";
    std::uint64_t seed = 20200101;
    std::uint64_t chunks = 64;
    unsigned threads = 0;
    double resolution = 0.0;
    int grid = 101;
    double z = 3.0;
    std::string out;
};

void add_common(CLI::App* cmd, Common& c, bool with_method = true) {
    cmd->add_option("--game", c.game, "ec, flnywy, or a name,weight[,population] file")->capture_default_str();
    cmd->add_option("--dist", c.dist, "uniform | two-atom:m | discrete:v=p;... | one-factor:rho[:marginal]")
        ->capture_default_str();
    if (with_method)
        cmd->add_option("--method", c.method, "auto | mc | wta-exact | conv | brute | asymptotic")->capture_default_str();
    cmd->add_option("--samples", c.samples, "Monte Carlo draws (1e8 style accepted)")->capture_default_str();
    cmd->add_option("--seed", c.seed, "Monte Carlo seed")->capture_default_str();
    cmd->add_option("--chunks", c.chunks, "Monte Carlo chunks (independent streams)")->capture_default_str();
    cmd->add_option("--threads", c.threads, "worker threads (0: WVG_THREADS or hardware)");
    cmd->add_option("--resolution", c.resolution, "lattice step for conv (0: default)");
    cmd->add_option("--grid", c.grid, "brute-force points per dimension")->capture_default_str();
    cmd->add_option("--z", c.z, "strictness multiple of the standard error")->capture_default_str();
    cmd->add_option("--out", c.out, "write CSV here instead of stdout");
}

McConfig mc_config(const Common& c, const MarginDistribution& dist) {
    McConfig cfg;
    cfg.samples = parse_count(c.samples);
    cfg.seed = c.seed;
    cfg.chunks = c.chunks;
    cfg.workers = c.threads;
    cfg.distribution = dist;
    return cfg;
}

std::string num(double x) {
    std::ostringstream os;
    os << std::setprecision(10) << x;
    return os.str();
}

bool all_kind(const Profile& p, RuleKind kind) {
    return std::all_of(p.rules().begin(), p.rules().end(), [kind](const Rule& r) { return r.kind() == kind; });
}

Method resolve(std::optional<Method> requested, const Profile& profile, const MarginDistribution& dist) {
    if (requested) return *requested;
    if (!dist.is_iid()) return Method::MonteCarlo;
    return all_kind(profile, RuleKind::WTA) ? Method::WtaExact : Method::Convolution;
}

PayoffEstimate asymptotic_payoffs(const Game& game, const Profile& profile, const MarginDistribution& dist) {
    Vector limits;
    if (all_kind(profile, RuleKind::CD)) {
        const double c = profile.rule(0).parameter();
        for (const auto& r : profile.rules())
            if (r.parameter() != c) throw UnsupportedError("asymptotic payoffs need a common district share c");
        limits = cd_limit(c, dist, game).limits;
    } else if (profile.is_symmetric()) {
        limits = symmetric_limit(profile.rule(0), dist, game);
    } else {
        throw UnsupportedError("asymptotic payoffs need a symmetric or congressional-district profile");
    }
    PayoffEstimate est;
    est.method = Method::Asymptotic;
    est.mean = limit_payoffs(limits, game.size());
    est.standard_error = Vector::Zero(est.mean.size());
    return est;
}

PayoffEstimate payoffs(const Game& game, const Profile& profile, const MarginDistribution& dist, Method method,
                       const Common& c) {
    switch (method) {
        case Method::MonteCarlo: return estimate_payoffs(game, profile, mc_config(c, dist));
        case Method::WtaExact:
            if (!all_kind(profile, RuleKind::WTA)) throw UnsupportedError("wta-exact needs the all-WTA profile");
            return wta_exact_payoffs(game, dist);
        case Method::Convolution: return conv_payoffs(game, profile, dist, {c.resolution});
        case Method::BruteForce: return bruteforce_payoffs(game, profile, dist, c.grid);
        case Method::Asymptotic: return asymptotic_payoffs(game, profile, dist);
    }
    throw UsageError("unknown method");
}

/// Writes to --out when given, else to `out`.
class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw UsageError("cannot write '" + path + "'");
        }
        stream_ = path.empty() ? &fallback : &file_;
    }
    std::ostream& operator*() { return *stream_; }

private:
    std::ofstream file_;
    std::ostream* stream_;
};

// ---------------------------------------------------------------- payoff

int cmd_payoff(const Common& c, const std::string& profile_spec, std::ostream& out) {
    const Game game = parse_game(c.game);
    const auto dist = parse_distribution(c.dist);
    const Profile profile = parse_profile(profile_spec, game);
    const Method method = resolve(parse_method(c.method), profile, dist);
    const auto est = payoffs(game, profile, dist, method, c);
    Sink sink(c.out, out);
    *sink << "group,name,weight,payoff,stderr,method\n";
    for (std::size_t i = 0; i < game.size(); ++i) {
        const auto k = static_cast<Eigen::Index>(i);
        *sink << i + 1 << ',' << csv_field(game.group(i).name) << ',' << num(game.weights()[k]) << ','
              << num(est.mean[k]) << ',' << num(est.standard_error[k]) << ',' << to_string(est.method) << '\n';
    }
    return kExitOk;
}

// ---------------------------------------------------------------- compare

int cmd_compare(const Common& c, const std::string& spec_a, const std::string& spec_b, std::ostream& out,
                std::ostream& err) {
    const Game game = parse_game(c.game);
    const auto dist = parse_distribution(c.dist);
    const Profile a = parse_profile(spec_a, game);
    const Profile b = parse_profile(spec_b, game);
    const auto requested = parse_method(c.method);
    const Method ma = resolve(requested, a, dist), mb = resolve(requested, b, dist);

    PayoffEstimate pa, pb, diff;
    ParetoVerdict verdict;
    if (ma == Method::MonteCarlo || mb == Method::MonteCarlo) {
        const std::vector<Profile> both{a, b};
        const std::pair<std::size_t, std::size_t> contrast{0, 1};
        auto r = estimate_many(game, both, std::span(&contrast, 1), mc_config(c, dist));
        pa = r.payoffs[0];
        pb = r.payoffs[1];
        diff = r.differences[0];
        verdict = pareto_compare_diff(diff, c.z);
    } else {
        pa = payoffs(game, a, dist, ma, c);
        pb = payoffs(game, b, dist, mb, c);
        diff.mean = pa.mean - pb.mean;
        diff.standard_error = Vector::Zero(diff.mean.size());
        diff.method = pa.method;
        verdict = pareto_compare(pa, pb, c.z);
    }

    Sink sink(c.out, out);
    *sink << "group,name,weight,payoff_a,stderr_a,payoff_b,stderr_b,ratio,diff,diff_stderr,significant\n";
    for (std::size_t i = 0; i < game.size(); ++i) {
        const auto k = static_cast<Eigen::Index>(i);
        *sink << i + 1 << ',' << csv_field(game.group(i).name) << ',' << num(game.weights()[k]) << ','
              << num(pa.mean[k]) << ',' << num(pa.standard_error[k]) << ',' << num(pb.mean[k]) << ','
              << num(pb.standard_error[k]) << ',' << num(pa.mean[k] / pb.mean[k]) << ',' << num(diff.mean[k]) << ','
              << num(diff.standard_error[k]) << ',' << verdict.significant[i] << '\n';
    }
    switch (verdict.outcome) {
        case ParetoOutcome::ADominates: err << "verdict: " << spec_a << " dominates " << spec_b << '\n'; break;
        case ParetoOutcome::BDominates: err << "verdict: " << spec_b << " dominates " << spec_a << '\n'; break;
        default: err << "verdict: " << to_string(verdict.outcome) << '\n';
    }
    return kExitOk;
}

// ---------------------------------------------------------------- asymptotic

int cmd_asymptotic(const Common& c, const std::string& rule_spec, double district, std::ostream& out) {
    const Game game = parse_game(c.game);
    const auto dist = parse_distribution(c.dist);
    const Rule rule = parse_rule(rule_spec, 0.0);
    const auto s = summarize(rule, district, dist, game);
    const Vector sym = symmetric_limit(rule, dist, game);
    const auto cd = cd_limit(district, dist, game);
    const std::size_t n = game.size();
    const double scale = std::sqrt(2.0 * std::numbers::pi * static_cast<double>(n));
    const Vector conv_rule = conv_payoffs(game, Profile::symmetric(rule, n), dist, {c.resolution}).mean * scale;
    const Vector conv_cd = conv_payoffs(game, Profile::cd(game, district), dist, {c.resolution}).mean * scale;

    Sink sink(c.out, out);
    *sink << "quantity,value\n"
          << "corr," << num(s.corr) << '\n'
          << "A_phi," << num(s.A_phi) << '\n'
          << "B," << num(s.B) << '\n'
          << "C," << num(s.C) << '\n'
          << "w_star," << num(s.w_star) << '\n'
          << "cd_dominates_everywhere," << (s.cd_dominates_everywhere ? 1 : 0) << '\n'
          << "mean_sq_weight," << num(s.mean_sq_weight) << "\n\n";
    *sink << "group,name,weight,limit_rule,scaled_conv_rule,limit_cd,scaled_conv_cd\n";
    for (std::size_t i = 0; i < n; ++i) {
        const auto k = static_cast<Eigen::Index>(i);
        *sink << i + 1 << ',' << csv_field(game.group(i).name) << ',' << num(game.weights()[k]) << ',' << num(sym[k])
              << ',' << num(conv_rule[k]) << ',' << num(cd.limits[k]) << ',' << num(conv_cd[k]) << '\n';
    }
    return kExitOk;
}

// ---------------------------------------------------------------- lorenz

int cmd_lorenz(const Common& c, const std::vector<std::string>& specs, std::ostream& out) {
    const Game game = parse_game(c.game);
    const auto dist = parse_distribution(c.dist);
    const auto requested = parse_method(c.method);
    std::vector<Vector> pay;
    for (const auto& spec : specs) {
        const Profile p = parse_profile(spec, game);
        pay.push_back(payoffs(game, p, dist, resolve(requested, p, dist), c).mean);
    }
    Sink sink(c.out, out);
    *sink << "profile,k,fraction,share\n";
    for (std::size_t p = 0; p < specs.size(); ++p) {
        const auto curve = lorenz_curve(pay[p]);
        for (std::size_t k = 0; k < curve.share.size(); ++k)
            *sink << csv_field(specs[p]) << ',' << k << ',' << num(curve.fraction[k]) << ',' << num(curve.share[k])
                  << '\n';
    }
    *sink << "\nprofile,gini\n";
    for (std::size_t p = 0; p < specs.size(); ++p) *sink << csv_field(specs[p]) << ',' << num(gini(pay[p])) << '\n';
    *sink << "\nrow,column,order\n";
    for (std::size_t p = 0; p < specs.size(); ++p)
        for (std::size_t q = 0; q < specs.size(); ++q)
            if (p != q)
                *sink << csv_field(specs[p]) << ',' << csv_field(specs[q]) << ','
                      << to_string(lorenz_dominates(pay[p], pay[q])) << '\n';
    return kExitOk;
}

// ---------------------------------------------------------------- reproduce

std::string flag(double delta, double tol) { return std::abs(delta) < tol ? "ok" : "DEV"; }

std::string fixed(double x, int digits) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(digits) << x;
    return os.str();
}

/// Fixed notation with an explicit sign; values that round to zero print as +0.
std::string signed_fixed(double x, int digits) {
    std::string s = fixed(std::abs(x), digits);
    const bool zero = s.find_first_not_of("0.") == std::string::npos;
    return (x < 0.0 && !zero ? "-" : "+") + s;
}

void write_class_table(std::ostream& md, std::ostream* csv, const std::string& title,
                       const std::vector<ClassRow>& rows, const std::array<std::string, 4>& columns, double tol,
                       int digits) {
    md << "### " << title << "\n\n| votes | states |";
    for (const auto& col : columns) md << ' ' << col << " | ref | Δ | |";
    md << "\n|---|---|";
    for (std::size_t k = 0; k < 4; ++k) md << "---|---|---|---|";
    md << '\n';
    for (const auto& r : rows) {
        md << "| " << r.votes << " | " << r.states << " |";
        for (std::size_t k = 0; k < 4; ++k) {
            const double d = r.value[k] - r.reference[k];
            md << ' ' << fixed(r.value[k], digits) << " | " << fixed(r.reference[k], digits) << " | "
               << signed_fixed(d, digits + 1) << " | " << flag(d, tol) << " |";
            if (csv)
                *csv << csv_field(title) << ',' << r.votes << ',' << r.states << ',' << columns[k] << ','
                     << num(r.value[k]) << ',' << num(r.standard_error[k]) << ',' << num(r.reference[k]) << ','
                     << num(d) << ',' << flag(d, tol) << '\n';
        }
        md << '\n';
    }
    md << '\n';
}

int cmd_reproduce(const Common& c, const std::string& target, bool samples_given, std::ostream& out) {
    std::ofstream csv_file;
    if (!c.out.empty()) {
        csv_file.open(c.out);
        if (!csv_file) throw UsageError("cannot write '" + c.out + "'");
    }
    std::ostream* csv = c.out.empty() ? nullptr : &csv_file;

    if (target == "example1") {
        const auto t = reproduce_example1();
        const std::array<std::string, 4> cols{"WTA", "PR", "POP", "GP"};
        out << "### Florida / New York / Wyoming (conv)\n\n| state |";
        for (const auto& col : cols) out << ' ' << col << " | ref | Δ | |";
        out << "\n|---|";
        for (std::size_t k = 0; k < 4; ++k) out << "---|---|---|---|";
        out << '\n';
        if (csv) *csv << "row,column,value,reference,delta,flag\n";
        for (std::size_t i = 0; i < 4; ++i) {
            out << "| " << t.rows[i] << " |";
            for (std::size_t k = 0; k < 4; ++k) {
                const double d = t.value[i][k] - t.reference[i][k];
                out << ' ' << fixed(t.value[i][k], 4) << " | " << fixed(t.reference[i][k], 3) << " | " << signed_fixed(d, 4) << " | " << flag(d, 1e-3) << " |";
                if (csv)
                    *csv << csv_field(t.rows[i]) << ',' << cols[k] << ',' << num(t.value[i][k]) << ','
                         << num(t.reference[i][k]) << ',' << num(d) << ',' << flag(d, 1e-3) << '\n';
            }
            out << '\n';
        }
        return kExitOk;
    }
    if (target != "ec-payoffs" && target != "ec-ratios")
        throw UsageError("unknown reproduction target '" + target + "' (example1 | ec-payoffs | ec-ratios)");

    const auto requested = parse_method(c.method);
    const Method method = requested.value_or(Method::MonteCarlo);
    Common cc = c;
    if (!samples_given) cc.samples = "1e8";
    const auto cfg = mc_config(cc, MarginDistribution::uniform_iid());
    const auto tables = reproduce_ec(method, cfg);
    out << "Method: " << to_string(method);
    if (method == Method::MonteCarlo) out << ", " << cfg.samples << " draws, seed " << cfg.seed;
    out << "\n\n";
    if (csv) *csv << "table,votes,states,column,value,stderr,reference,delta,flag\n";
    if (target == "ec-payoffs")
        write_class_table(out, csv, "payoffs", tables.payoffs, {"WTA", "PR", "a", "CD"}, 1e-3, 4);
    else
        write_class_table(out, csv, "ratios", tables.ratios, {"WTA/PR", "a/PR", "CD/PR", "CD/WTA"}, 4e-3, 3);
    return kExitOk;
}

// ---------------------------------------------------------------- export

int cmd_export(const Common& c, std::ostream& out) {
    const Game game = parse_game(c.game);
    Sink sink(c.out, out);
    write_weights(game, *sink);
    return kExitOk;
}

// ---------------------------------------------------------------- JSON run files

std::vector<std::string> argv_from_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open run file '" + path + "'");
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what(), 0);
    }
    if (!j.is_object() || !j.contains("command") || !j["command"].is_string())
        throw UsageError("run file needs a \"command\" string");
    std::vector<std::string> args{"wvg", j["command"].get<std::string>()};
    for (const auto& [key, value] : j.items()) {
        if (key == "command" || key == "args") continue;
        if (value.is_boolean()) {
            if (value.get<bool>()) args.push_back("--" + key);
        } else if (value.is_string()) {
            args.push_back("--" + key);
            args.push_back(value.get<std::string>());
        } else if (value.is_number()) {
            args.push_back("--" + key);
            args.push_back(value.is_number_float() ? num(value.get<double>()) : value.dump());
        } else {
            throw UsageError("run file key '" + key + "' must be a string, number or boolean");
        }
    }
    if (j.contains("args")) {
        if (!j["args"].is_array()) throw UsageError("\"args\" must be an array of strings");
        for (const auto& a : j["args"]) args.push_back(a.get<std::string>());
    }
    return args;
}

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Weighted voting games: payoffs under weight-allocation rules"};
    app.require_subcommand(1);

    Common payoff_opts, compare_opts, asym_opts, lorenz_opts, repro_opts, export_opts;
    std::string profile = "wta";
    auto* payoff = app.add_subcommand("payoff", "per-group expected payoffs");
    add_common(payoff, payoff_opts);
    payoff->add_option("--profile", profile, "profile specification")->capture_default_str();

    std::string spec_a, spec_b;
    auto* compare = app.add_subcommand("compare", "Pareto comparison and payoff ratios of two profiles");
    add_common(compare, compare_opts);
    compare->add_option("a", spec_a, "profile A")->required();
    compare->add_option("b", spec_b, "profile B")->required();

    std::string rule = "pr";
    double district = 2.0;
    auto* asym = app.add_subcommand("asymptotic", "large-n limit coefficients and predictions");
    add_common(asym, asym_opts, false);
    asym->add_option("--rule", rule, "reference rule")->capture_default_str();
    asym->add_option("--cd", district, "district share c")->capture_default_str();

    std::vector<std::string> lorenz_specs;
    auto* lorenz = app.add_subcommand("lorenz", "Lorenz curves, Gini and dominance matrix");
    add_common(lorenz, lorenz_opts);
    lorenz->add_option("profiles", lorenz_specs, "profile specifications")->required();

    std::string target;
    auto* repro = app.add_subcommand("reproduce", "reference tables side by side with computed values");
    add_common(repro, repro_opts);
    repro->add_option("target", target, "example1 | ec-payoffs | ec-ratios")->required();

    auto* exp = app.add_subcommand("export", "write the game's weight table as CSV");
    add_common(exp, export_opts, false);

    std::string run_file;
    auto* runner = app.add_subcommand("run", "execute a JSON run file");
    runner->add_option("file", run_file, "JSON file with \"command\", flags and \"args\"")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    if (payoff->parsed()) return cmd_payoff(payoff_opts, profile, out);
    if (compare->parsed()) return cmd_compare(compare_opts, spec_a, spec_b, out, err);
    if (asym->parsed()) return cmd_asymptotic(asym_opts, rule, district, out);
    if (lorenz->parsed()) return cmd_lorenz(lorenz_opts, lorenz_specs, out);
    if (repro->parsed()) return cmd_reproduce(repro_opts, target, repro->count("--samples") > 0, out);
    if (exp->parsed()) return cmd_export(export_opts, out);
    if (runner->parsed()) {
        const auto args = argv_from_json(run_file);
        if (args[1] == "run") throw UsageError("run files cannot nest");
        std::vector<const char*> ptrs;
        for (const auto& a : args) ptrs.push_back(a.c_str());
        return dispatch(static_cast<int>(ptrs.size()), ptrs.data(), out, err);
    }
    return kExitUsage;
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    try {
        return dispatch(argc, argv, out, err);
    } catch (const ConfigError& e) {
        err << "configuration error: " << e.what() << '\n';
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
    } catch (const UnsupportedError& e) {
        err << "unsupported: " << e.what() << '\n';
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << '\n';
    } catch (const AccuracyError& e) {
        err << "accuracy error: " << e.what() << '\n';
        return kExitNumeric;
    } catch (const std::exception& e) {
        err << "numeric failure: " << e.what() << '\n';
        return kExitNumeric;
    }
    return kExitUsage;
}

} // namespace wvg::cli
