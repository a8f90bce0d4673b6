#include "wvg/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <thread>

namespace wvg {

namespace {

constexpr Eigen::Index kBatch = 2048;

void validate(const Game& game, std::span<const Profile> profiles,
              std::span<const std::pair<std::size_t, std::size_t>> contrasts, const McConfig& cfg) {
    if (cfg.samples == 0) throw UsageError("Monte Carlo needs samples >= 1");
    if (cfg.chunks == 0) throw UsageError("Monte Carlo needs chunks >= 1");
    if (profiles.empty()) throw UsageError("no profile to estimate");
    for (const auto& p : profiles)
        if (p.size() != game.size()) throw UsageError("profile size does not match the game");
    for (const auto& [a, b] : contrasts)
        if (a >= profiles.size() || b >= profiles.size()) throw UsageError("contrast refers to an unknown profile");
}

} // namespace

std::string to_string(Method m) {
    switch (m) {
        case Method::MonteCarlo: return "mc";
        case Method::WtaExact: return "wta-exact";
        case Method::Convolution: return "conv";
        case Method::BruteForce: return "brute";
        case Method::Asymptotic: return "asymptotic";
    }
    return "?";
}

void ChunkSums::merge(const ChunkSums& other) {
    if (sum.empty()) {
        *this = other;
        return;
    }
    count += other.count;
    for (std::size_t q = 0; q < sum.size(); ++q) {
        sum[q] += other.sum[q];
        sum_sq[q] += other.sum_sq[q];
    }
}

std::uint64_t chunk_size(const McConfig& cfg, std::uint64_t chunk) {
    const std::uint64_t per = (cfg.samples + cfg.chunks - 1) / cfg.chunks;
    const std::uint64_t start = per * chunk;
    if (start >= cfg.samples) return 0;
    return std::min(per, cfg.samples - start);
}

ChunkSums run_chunk(const Game& game, std::span<const Profile> profiles,
                    std::span<const std::pair<std::size_t, std::size_t>> contrasts, const McConfig& cfg,
                    std::uint64_t chunk) {
    validate(game, profiles, contrasts, cfg);
    const auto n = static_cast<Eigen::Index>(game.size());
    const auto np = static_cast<Eigen::Index>(profiles.size());
    const auto nc = static_cast<Eigen::Index>(contrasts.size());
    const Vector& w = game.weights();

    ChunkSums out;
    out.count = chunk_size(cfg, chunk);
    out.sum.assign(static_cast<std::size_t>(np + nc), Vector::Zero(n));
    out.sum_sq.assign(static_cast<std::size_t>(np + nc), Vector::Zero(n));

    // A profile equal to an earlier one reuses its decisions, so contrasts
    // between equal profiles are exactly zero.
    std::vector<std::size_t> source(profiles.size());
    for (std::size_t p = 0; p < profiles.size(); ++p) {
        source[p] = p;
        for (std::size_t q = 0; q < p; ++q) {
            bool same = true;
            for (std::size_t j = 0; j < game.size() && same; ++j)
                same = profiles[p].rule(j).same_function(profiles[q].rule(j));
            if (same) {
                source[p] = source[q];
                break;
            }
        }
    }

    // Single-piece profiles: S = sgn(Θ)·(w∘a) + Θ·(w∘b), batched as matrix products.
    std::vector<Eigen::Index> slot(profiles.size(), -1);
    std::vector<std::size_t> affine;
    for (std::size_t p = 0; p < profiles.size(); ++p) {
        const auto& rules = profiles[p].rules();
        if (source[p] == p &&
            std::all_of(rules.begin(), rules.end(), [](const Rule& r) { return r.pieces().size() == 1; })) {
            slot[p] = static_cast<Eigen::Index>(affine.size());
            affine.push_back(p);
        }
    }
    const auto na = static_cast<Eigen::Index>(affine.size());
    Eigen::MatrixXd intercepts(n, na), slopes(n, na);
    for (Eigen::Index c = 0; c < na; ++c)
        for (Eigen::Index j = 0; j < n; ++j) {
            const auto& piece = profiles[affine[static_cast<std::size_t>(c)]].rule(static_cast<std::size_t>(j)).pieces().front();
            intercepts(j, c) = w[j] * piece.intercept;
            slopes(j, c) = w[j] * piece.slope;
        }

    RandomStream stream(cfg.seed, chunk);
    Eigen::Array<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> draws(kBatch, n);
    Eigen::ArrayXXd theta(kBatch, n), signs(kBatch, n);
    Eigen::ArrayXd coins(kBatch);
    Eigen::MatrixXd sums(kBatch, na);
    Eigen::MatrixXd tracked(kBatch, np + nc);  // decisions, then decision differences
    Eigen::MatrixXd partial(n, np + nc);

    for (std::uint64_t done = 0; done < out.count;) {
        const auto rows = static_cast<Eigen::Index>(std::min<std::uint64_t>(kBatch, out.count - done));
        // Each draw consumes n margins and then one coin, shared by every profile.
        for (Eigen::Index r = 0; r < rows; ++r) {
            cfg.distribution.sample(Eigen::Map<Vector>(draws.data() + r * n, n), stream);
            coins[r] = stream.coin();
        }
        theta.topRows(rows) = draws.topRows(rows);
        const auto th = theta.topRows(rows);
        const auto co = coins.head(rows);

        if (na > 0) {
            signs.topRows(rows) = (th > 0.0).cast<double>() - (th < 0.0).cast<double>();
            sums.topRows(rows).noalias() = signs.topRows(rows).matrix() * intercepts;
            sums.topRows(rows).noalias() += th.matrix() * slopes;
        }
        for (std::size_t p = 0; p < profiles.size(); ++p) {
            const auto col = static_cast<Eigen::Index>(p);
            if (source[p] != p) {
                tracked.col(col).head(rows) = tracked.col(static_cast<Eigen::Index>(source[p])).head(rows);
                continue;
            }
            Eigen::ArrayXd s;
            if (slot[p] >= 0) {
                s = sums.col(slot[p]).head(rows).array();
            } else {
                s = Eigen::ArrayXd::Zero(rows);
                for (Eigen::Index j = 0; j < n; ++j)
                    s += w[j] * profiles[p].rule(static_cast<std::size_t>(j)).apply(th.col(j));
            }
            tracked.col(col).head(rows) = (s > 0.0).select(1.0, (s < 0.0).select(-1.0, co)).matrix();
        }
        for (Eigen::Index c = 0; c < nc; ++c) {
            const auto [a, b] = contrasts[static_cast<std::size_t>(c)];
            tracked.col(np + c).head(rows) =
                tracked.col(static_cast<Eigen::Index>(a)).head(rows) - tracked.col(static_cast<Eigen::Index>(b)).head(rows);
        }

        partial.noalias() = th.matrix().transpose() * tracked.topRows(rows);
        for (Eigen::Index q = 0; q < np + nc; ++q) out.sum[static_cast<std::size_t>(q)] += partial.col(q);

        // (θ_i d)² = θ_i² for a decision; contrasts need θ_i²(d_A - d_B)².
        const Vector sq = th.square().colwise().sum().transpose().matrix();
        for (Eigen::Index p = 0; p < np; ++p) out.sum_sq[static_cast<std::size_t>(p)] += sq;
        if (nc > 0) {
            partial.leftCols(nc).noalias() =
                th.square().matrix().transpose() * tracked.middleCols(np, nc).topRows(rows).cwiseAbs2();
            for (Eigen::Index c = 0; c < nc; ++c) out.sum_sq[static_cast<std::size_t>(np + c)] += partial.col(c);
        }
        done += static_cast<std::uint64_t>(rows);
    }
    return out;
}

PayoffEstimate finalize(const ChunkSums& sums, std::size_t quantity) {
    PayoffEstimate est;
    est.samples = sums.count;
    est.method = Method::MonteCarlo;
    const double n = static_cast<double>(sums.count);
    est.mean = sums.sum.at(quantity) / n;
    if (sums.count > 1) {
        const Vector var =
            ((sums.sum_sq[quantity] - n * est.mean.cwiseAbs2()) / (n - 1.0)).cwiseMax(0.0);
        est.standard_error = (var / n).cwiseSqrt();
    } else {
        est.standard_error = Vector::Zero(est.mean.size());
    }
    return est;
}

unsigned default_workers() {
    if (const char* env = std::getenv("WVG_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

McResult estimate_many(const Game& game, std::span<const Profile> profiles,
                       std::span<const std::pair<std::size_t, std::size_t>> contrasts, const McConfig& cfg) {
    validate(game, profiles, contrasts, cfg);
    std::vector<ChunkSums> parts(cfg.chunks);
    const unsigned workers =
        static_cast<unsigned>(std::min<std::uint64_t>(cfg.workers ? cfg.workers : default_workers(), cfg.chunks));

    std::atomic<std::uint64_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    auto work = [&] {
        for (std::uint64_t c = next++; c < cfg.chunks && !failed; c = next++) {
            try {
                parts[c] = run_chunk(game, profiles, contrasts, cfg, c);
            } catch (...) {
                if (!failed.exchange(true)) failure = std::current_exception();
            }
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < workers; ++t) pool.emplace_back(work);
    }
    if (failure) std::rethrow_exception(failure);

    ChunkSums total;
    for (const auto& part : parts) total.merge(part);

    McResult result;
    for (std::size_t p = 0; p < profiles.size(); ++p) result.payoffs.push_back(finalize(total, p));
    for (std::size_t c = 0; c < contrasts.size(); ++c)
        result.differences.push_back(finalize(total, profiles.size() + c));
    return result;
}

PayoffEstimate estimate_payoffs(const Game& game, const Profile& profile, const McConfig& cfg) {
    return estimate_many(game, std::span(&profile, 1), {}, cfg).payoffs.front();
}

PayoffEstimate estimate_payoff_diff(const Game& game, const Profile& a, const Profile& b, const McConfig& cfg) {
    const std::vector<Profile> profiles{a, b};
    const std::pair<std::size_t, std::size_t> contrast{0, 1};
    return estimate_many(game, profiles, std::span(&contrast, 1), cfg).differences.front();
}

} // namespace wvg
