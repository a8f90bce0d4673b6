#include "wvg/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "wvg/lattice.hpp"

namespace wvg {

namespace {

void require_iid(const MarginDistribution& dist, const char* method) {
    if (!dist.is_iid())
        throw UnsupportedError(std::string(method) + " requires independent margins; use brute force or Monte Carlo");
}

void require_match(const Game& game, const Profile& profile) {
    if (profile.size() != game.size()) throw UsageError("profile size does not match the game");
}

bool is_integer(double x) { return std::abs(x - std::round(x)) <= 1e-9 * std::max(1.0, std::abs(x)); }

std::optional<double> integer_gcd(const Vector& w) {
    long long g = 0;
    for (double x : w) {
        if (!is_integer(x)) return std::nullopt;
        g = std::gcd(g, static_cast<long long>(std::llround(x)));
    }
    return static_cast<double>(g);
}

double min_nonzero_scale(const Game& game, const Profile& profile) {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < game.size(); ++j) {
        const double s = game.weights()[static_cast<Eigen::Index>(j)] * profile.rule(j).sup_abs();
        if (s > 0.0) m = std::min(m, s);
    }
    return m;
}

double snap(double h, std::optional<double> gcd) {
    if (!gcd) return h;
    return *gcd / std::ceil(*gcd / h);
}

double resolve_resolution(const Game& game, const Profile& profile, double requested) {
    if (requested == 0.0) return default_resolution(game, profile);
    if (!(requested > 0.0)) throw UsageError("lattice resolution must be positive");
    const double scale = min_nonzero_scale(game, profile);
    if (requested > scale) {
        std::ostringstream os;
        os << "lattice step " << requested << " exceeds the smallest nonzero group scale " << scale;
        throw AccuracyError(os.str());
    }
    return requested;
}

bool use_direct(const std::vector<lattice::Factor>& factors, ConvolutionMethod method) {
    if (method != ConvolutionMethod::Auto) return method == ConvolutionMethod::Direct;
    std::size_t total = 0;
    for (const auto& f : factors) total += f.mass.size();
    return factors.size() <= 8 && total <= 4096;
}

OpponentSumDistribution make_distribution(double h, lattice::Factor f, bool from_transform) {
    lattice::clean(f.mass, from_transform);
    return OpponentSumDistribution(h, std::move(f.mass), f.half_width);
}

std::vector<lattice::Factor> project_all(const Game& game, const Profile& profile, const Marginal& marginal,
                                         double h) {
    std::vector<lattice::Factor> factors;
    factors.reserve(game.size());
    for (std::size_t j = 0; j < game.size(); ++j)
        factors.push_back(lattice::project(game.weights()[static_cast<Eigen::Index>(j)], profile.rule(j), marginal, h));
    return factors;
}

lattice::Factor point_mass() { return lattice::Factor{{1.0}, 0}; }

} // namespace

// ---------------------------------------------------------------- OpponentSumDistribution

OpponentSumDistribution::OpponentSumDistribution(double resolution, std::vector<double> mass, std::ptrdiff_t offset)
    : step_(resolution), mass_(std::move(mass)), offset_(offset) {
    if (!(step_ > 0.0)) throw UsageError("lattice resolution must be positive");
    if (mass_.empty()) throw UsageError("empty lattice distribution");
    below_.resize(mass_.size() + 1);
    long double acc = 0.0L;
    below_[0] = 0.0;
    for (std::size_t k = 0; k < mass_.size(); ++k) {
        acc += mass_[k];
        below_[k + 1] = static_cast<double>(acc);
    }
}

double OpponentSumDistribution::mass_at(double v) const noexcept {
    const auto k = static_cast<std::ptrdiff_t>(std::llround(v / step_)) + offset_;
    if (k < 0 || k >= static_cast<std::ptrdiff_t>(mass_.size())) return 0.0;
    return mass_[static_cast<std::size_t>(k)];
}

double OpponentSumDistribution::cdf(double y) const noexcept {
    const double u = y / step_ + static_cast<double>(offset_) + 0.5;
    const double cell = std::floor(u);
    if (cell < 0.0) return 0.0;
    if (cell >= static_cast<double>(mass_.size())) return below_.back();
    const auto m = static_cast<std::size_t>(cell);
    return below_[m] + mass_[m] * (u - cell);
}

double OpponentSumDistribution::total() const noexcept { return below_.back(); }

double OpponentSumDistribution::mean() const noexcept {
    long double s = 0.0L;
    for (std::size_t k = 0; k < mass_.size(); ++k) s += mass_[k] * value(k);
    return static_cast<double>(s);
}

double OpponentSumDistribution::variance() const noexcept {
    const double mu = mean();
    long double s = 0.0L;
    for (std::size_t k = 0; k < mass_.size(); ++k) s += mass_[k] * (value(k) - mu) * (value(k) - mu);
    return static_cast<double>(s);
}

bool OpponentSumDistribution::has_full_support(double half_width) const noexcept {
    const double tol = 1e-9 * step_;
    for (std::size_t k = 0; k < mass_.size(); ++k)
        if (std::abs(value(k)) <= half_width + tol && !(mass_[k] > 0.0)) return false;
    // The grid itself must reach the interval.
    return value(0) <= -half_width + step_ && value(mass_.size() - 1) >= half_width - step_;
}

// ---------------------------------------------------------------- resolution

double default_resolution(const Game& game, const Profile& profile) {
    require_match(game, profile);
    const auto gcd = integer_gcd(game.weights());
    double h = snap(kDefaultResolutionFraction * game.total_weight(), gcd);
    const double scale = min_nonzero_scale(game, profile);
    if (std::isfinite(scale) && h > scale) h = snap(scale / 2.0, gcd);
    return h;
}

// ---------------------------------------------------------------- WTA exact

PayoffEstimate wta_exact_payoffs(const Game& game, const MarginDistribution& dist) {
    require_iid(dist, "the exact winner-take-all oracle");
    const Vector& w = game.weights();

    // Smallest multiplier making every weight an integer. The tolerance is near
    // round-off so that irrational weights are not matched by a convergent.
    const auto scaled_integer = [](double x) { return std::abs(x - std::round(x)) <= 1e-12 * std::max(1.0, std::abs(x)); };
    long long multiplier = 0;
    for (long long q = 1; q <= 100000; ++q) {
        if (std::all_of(w.begin(), w.end(), [&](double x) { return scaled_integer(x * static_cast<double>(q)); })) {
            multiplier = q;
            break;
        }
    }
    if (multiplier == 0) throw UsageError("weights cannot be scaled to integers for the exact oracle");
    std::vector<long long> iw;
    long long total = 0;
    for (double x : w) {
        iw.push_back(std::llround(x * static_cast<double>(multiplier)));
        total += iw.back();
    }
    if (total > 1'000'000) throw UsageError("scaled total weight exceeds 10^6; exact oracle refused");

    double p_zero = 0.0;
    for (const auto& a : dist.marginal().atoms())
        if (a.value == 0.0) p_zero += a.probability;
    const double p_side = 0.5 * (1.0 - p_zero);
    const double mean_abs = moments(dist).mean_abs;

    const auto width = static_cast<std::size_t>(2 * total + 1);
    PayoffEstimate est;
    est.method = Method::WtaExact;
    est.mean = Vector::Zero(w.size());
    est.standard_error = Vector::Zero(w.size());

    std::vector<double> cur(width), next(width);
    for (std::size_t i = 0; i < game.size(); ++i) {
        std::fill(cur.begin(), cur.end(), 0.0);
        cur[static_cast<std::size_t>(total)] = 1.0;
        long long reach = 0;  // current support is [-reach, reach]
        for (std::size_t j = 0; j < game.size(); ++j) {
            if (j == i) continue;
            const long long wj = iw[j];
            std::fill(next.begin(), next.end(), 0.0);
            for (long long t = -reach; t <= reach; ++t) {
                const double p = cur[static_cast<std::size_t>(t + total)];
                if (p == 0.0) continue;
                next[static_cast<std::size_t>(t + wj + total)] += p_side * p;
                next[static_cast<std::size_t>(t - wj + total)] += p_side * p;
                if (p_zero > 0.0) next[static_cast<std::size_t>(t + total)] += p_zero * p;
            }
            reach += wj;
            std::swap(cur, next);
        }
        const long long wi = iw[i];
        long double inside = 0.0L;
        for (long long t = -reach; t <= reach; ++t) {
            const double p = cur[static_cast<std::size_t>(t + total)];
            if (std::llabs(t) < wi)
                inside += p;
            else if (std::llabs(t) == wi)
                inside += 0.5L * p;
        }
        est.mean[static_cast<Eigen::Index>(i)] = mean_abs * static_cast<double>(inside);
    }
    return est;
}

// ---------------------------------------------------------------- opponent sums

std::vector<OpponentSumDistribution> opponent_sums(const Game& game, const Profile& profile,
                                                   const MarginDistribution& dist, const LatticeOptions& options) {
    require_match(game, profile);
    require_iid(dist, "the convolution oracle");
    const double h = resolve_resolution(game, profile, options.resolution);
    const auto factors = project_all(game, profile, dist.marginal(), h);
    const std::size_t n = factors.size();

    std::vector<OpponentSumDistribution> out;
    out.reserve(n);
    if (n == 1) {
        out.push_back(make_distribution(h, point_mass(), false));
        return out;
    }

    if (use_direct(factors, options.method)) {
        for (std::size_t i = 0; i < n; ++i) {
            lattice::Factor acc = point_mass();
            for (std::size_t j = 0; j < n; ++j)
                if (j != i) acc = lattice::convolve(acc, factors[j]);
            out.push_back(make_distribution(h, std::move(acc), false));
        }
        return out;
    }

    std::size_t full = 1;
    for (const auto& f : factors) full += f.mass.size() - 1;
    const lattice::FourierConvolver fft(lattice::fft_length(full));

    // suffix[j] = Π_{k≥j} F_k; the prefix product is carried along the loop.
    std::vector<lattice::Spectrum> spectra;
    spectra.reserve(n);
    for (const auto& f : factors) spectra.push_back(fft.forward(f));
    std::vector<lattice::Spectrum> suffix(n + 1, lattice::Spectrum(fft.spectrum_size(), 1.0));
    for (std::size_t j = n; j-- > 0;)
        for (std::size_t k = 0; k < fft.spectrum_size(); ++k) suffix[j][k] = suffix[j + 1][k] * spectra[j][k];

    lattice::Spectrum prefix(fft.spectrum_size(), 1.0);
    std::ptrdiff_t all_half = 0;
    for (const auto& f : factors) all_half += f.half_width;
    for (std::size_t i = 0; i < n; ++i) {
        lattice::Spectrum prod(fft.spectrum_size());
        for (std::size_t k = 0; k < prod.size(); ++k) prod[k] = prefix[k] * suffix[i + 1][k];
        lattice::Factor f;
        f.half_width = all_half - factors[i].half_width;
        f.mass = fft.inverse(prod, static_cast<std::size_t>(2 * f.half_width + 1));
        out.push_back(make_distribution(h, std::move(f), true));
        for (std::size_t k = 0; k < prefix.size(); ++k) prefix[k] *= spectra[i][k];
    }
    return out;
}

OpponentSumDistribution opponent_sum(const Game& game, const Profile& profile, const MarginDistribution& dist,
                                     std::size_t exclude, const LatticeOptions& options) {
    require_match(game, profile);
    require_iid(dist, "the convolution oracle");
    if (exclude >= game.size()) throw UsageError("excluded group index out of range");
    const double h = resolve_resolution(game, profile, options.resolution);
    const auto factors = project_all(game, profile, dist.marginal(), h);

    std::vector<lattice::Factor> others;
    for (std::size_t j = 0; j < factors.size(); ++j)
        if (j != exclude) others.push_back(factors[j]);
    if (others.empty()) return make_distribution(h, point_mass(), false);

    if (use_direct(others, options.method)) {
        lattice::Factor acc = point_mass();
        for (const auto& f : others) acc = lattice::convolve(acc, f);
        return make_distribution(h, std::move(acc), false);
    }
    std::size_t full = 1;
    std::ptrdiff_t half = 0;
    for (const auto& f : others) {
        full += f.mass.size() - 1;
        half += f.half_width;
    }
    const lattice::FourierConvolver fft(lattice::fft_length(full));
    lattice::Spectrum prod(fft.spectrum_size(), 1.0);
    for (const auto& f : others) {
        const auto s = fft.forward(f);
        for (std::size_t k = 0; k < prod.size(); ++k) prod[k] *= s[k];
    }
    lattice::Factor f;
    f.half_width = half;
    f.mass = fft.inverse(prod, full);
    return make_distribution(h, std::move(f), true);
}

// ---------------------------------------------------------------- convolution payoffs

double conv_payoff(const Game& game, const Profile& profile, const MarginDistribution& dist, std::size_t i,
                   const OpponentSumDistribution& opp) {
    const Rule& rule = profile.rule(i);
    const double w = game.weights()[static_cast<Eigen::Index>(i)];
    long double acc = 0.0L;
    for (const auto& q : lattice::payoff_nodes(dist.marginal(), rule, w, opp.resolution()))
        acc += q.weight * q.x * opp.central(w * rule(q.x));
    return static_cast<double>(2.0L * acc);
}

PayoffEstimate conv_payoffs(const Game& game, const Profile& profile, const MarginDistribution& dist,
                            const ConvolutionOptions& options) {
    const auto opps = opponent_sums(game, profile, dist, {options.resolution, options.method});
    PayoffEstimate est;
    est.method = Method::Convolution;
    est.mean.resize(static_cast<Eigen::Index>(game.size()));
    est.standard_error = Vector::Zero(static_cast<Eigen::Index>(game.size()));
    for (std::size_t i = 0; i < game.size(); ++i)
        est.mean[static_cast<Eigen::Index>(i)] = conv_payoff(game, profile, dist, i, opps[i]);
    return est;
}

// ---------------------------------------------------------------- brute force

namespace {

struct GridDimension {
    std::vector<double> theta;
    std::vector<double> value;  // w_j φ_j(θ)
    std::vector<double> weight;
};

/// About m midpoint cells over [-1,1] with edges at 0 and ±breaks; cells are
/// shared out in proportion to segment length, at least one per segment.
/// Weights are probabilities under the uniform law.
std::vector<QuadratureNode> midpoint_cells(int m, const std::vector<double>& breaks) {
    std::vector<double> edges{0.0, 1.0};
    for (double b : breaks) edges.push_back(b);
    std::sort(edges.begin(), edges.end());
    std::vector<QuadratureNode> half;
    for (std::size_t s = 0; s + 1 < edges.size(); ++s) {
        const double lo = edges[s], hi = edges[s + 1];
        const int cells = std::max(1, static_cast<int>(std::lround(0.5 * m * (hi - lo))));
        const double width = (hi - lo) / cells;
        for (int k = 0; k < cells; ++k) half.push_back({lo + (k + 0.5) * width, 0.5 * width});
    }
    std::vector<QuadratureNode> nodes;
    for (auto it = half.rbegin(); it != half.rend(); ++it) nodes.push_back({-it->x, it->weight});
    nodes.insert(nodes.end(), half.begin(), half.end());
    return nodes;
}

class GridSweep {
public:
    GridSweep(const std::vector<GridDimension>& dims, double base_weight, Vector& acc)
        : dims_(dims), acc_(acc), base_(base_weight), index_(dims.size()) {}

    void run() { descend(0, 0.0, base_); }

private:
    void descend(std::size_t d, double partial, double weight) {
        const auto& dim = dims_[d];
        if (d + 1 == dims_.size()) {
            long double sum_d = 0.0L, sum_td = 0.0L;
            for (std::size_t k = 0; k < dim.theta.size(); ++k) {
                const double s = partial + dim.value[k];
                const double sign = (s > 0.0) - (s < 0.0);
                sum_d += dim.weight[k] * sign;
                sum_td += dim.weight[k] * dim.theta[k] * sign;
            }
            for (std::size_t j = 0; j < d; ++j)
                acc_[static_cast<Eigen::Index>(j)] += weight * dims_[j].theta[index_[j]] * static_cast<double>(sum_d);
            acc_[static_cast<Eigen::Index>(d)] += weight * static_cast<double>(sum_td);
            return;
        }
        for (std::size_t k = 0; k < dim.theta.size(); ++k) {
            index_[d] = k;
            descend(d + 1, partial + dim.value[k], weight * dim.weight[k]);
        }
    }

    const std::vector<GridDimension>& dims_;
    Vector& acc_;
    double base_;
    std::vector<std::size_t> index_;
};

} // namespace

PayoffEstimate bruteforce_payoffs(const Game& game, const Profile& profile, const MarginDistribution& dist,
                                  int grid_per_dimension) {
    require_match(game, profile);
    if (game.size() > 5) throw UsageError("brute force is limited to n <= 5 groups");
    if (grid_per_dimension < 1) throw UsageError("brute-force grid needs at least one point per dimension");

    // Latent nodes per dimension: midpoints for the uniform law, atoms otherwise.
    // Under independence the cells of group j also break at ±(rule breakpoints)
    // so that the rule's own jumps never fall inside a cell.
    const auto& marginal = dist.marginal();
    const std::size_t n = game.size();
    std::vector<std::vector<QuadratureNode>> latent(n);
    for (std::size_t j = 0; j < n; ++j) {
        if (!marginal.is_uniform()) {
            for (const auto& a : marginal.atoms()) latent[j].push_back({a.value, a.probability});
        } else if (dist.is_one_factor()) {
            latent[j] = midpoint_cells(grid_per_dimension, std::vector<double>{});
        } else {
            latent[j] = midpoint_cells(grid_per_dimension, profile.rule(j).breakpoints());
        }
    }
    const std::vector<int> signs = dist.is_one_factor() ? std::vector<int>{-1, 1} : std::vector<int>{1};
    double points = static_cast<double>(signs.size());
    for (const auto& l : latent) points *= static_cast<double>(l.size());
    if (points > 1e9) throw UsageError("brute-force grid exceeds the 10^9 point budget");

    Vector acc = Vector::Zero(static_cast<Eigen::Index>(n));
    for (int s : signs) {
        std::vector<GridDimension> dims(n);
        for (std::size_t j = 0; j < n; ++j) {
            const double w = game.weights()[static_cast<Eigen::Index>(j)];
            for (const auto& node : latent[j]) {
                double theta = node.x;
                if (dist.is_one_factor())
                    theta = std::clamp(dist.rho() * s * std::abs(node.x) + (1.0 - dist.rho()) * node.x, -1.0, 1.0);
                dims[j].theta.push_back(theta);
                dims[j].value.push_back(w * profile.rule(j)(theta));
                dims[j].weight.push_back(node.weight);
            }
        }
        GridSweep(dims, 1.0 / static_cast<double>(signs.size()), acc).run();
    }

    PayoffEstimate est;
    est.method = Method::BruteForce;
    est.mean = acc;
    est.standard_error = Vector::Zero(acc.size());
    est.samples = static_cast<std::uint64_t>(points);
    return est;
}

// ---------------------------------------------------------------- interim payoffs

double interim_payoff(const Game& game, std::size_t i, double x, double theta, const OpponentSumDistribution& opp) {
    if (i >= game.size()) throw UsageError("group index out of range");
    if (!(x >= -1.0 && x <= 1.0)) throw UsageError("weight margin outside [-1,1]");
    const double w = game.weights()[static_cast<Eigen::Index>(i)];
    // P{S > -a} - P{S < -a} = P{-a < S ≤ a} for symmetric S.
    return theta * opp.central(w * x);
}

std::vector<double> best_response(const Game& game, std::size_t i, double theta, const OpponentSumDistribution& opp,
                                  std::span<const double> x_grid) {
    if (x_grid.empty()) throw UsageError("best response needs a non-empty grid");
    std::vector<double> values;
    values.reserve(x_grid.size());
    for (double x : x_grid) values.push_back(interim_payoff(game, i, x, theta, opp));
    const double best = *std::max_element(values.begin(), values.end());
    std::vector<double> argmax;
    for (std::size_t k = 0; k < x_grid.size(); ++k)
        if (values[k] >= best - 1e-12) argmax.push_back(x_grid[k]);
    return argmax;
}

std::vector<double> uniform_grid(int points) {
    if (points < 2) throw UsageError("grid needs at least two points");
    std::vector<double> g(static_cast<std::size_t>(points));
    for (int k = 0; k < points; ++k) g[static_cast<std::size_t>(k)] = -1.0 + 2.0 * k / (points - 1);
    g.back() = 1.0;
    return g;
}

} // namespace wvg
