#include "wvg/lattice.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <mutex>

namespace wvg::lattice {

namespace {

// ∫_{-∞}^t max(0, 1 - |u|) du
double hat_cdf(double t) noexcept {
    if (t <= -1.0) return 0.0;
    if (t <= 0.0) return 0.5 * (t + 1.0) * (t + 1.0);
    if (t <= 1.0) return 1.0 - 0.5 * (1.0 - t) * (1.0 - t);
    return 1.0;
}

void add_atom(std::vector<double>& pos, double u, double p) {
    const double k0 = std::floor(u);
    const double f = u - k0;
    const auto k = static_cast<std::size_t>(k0);
    pos[k] += p * (1.0 - f);
    if (f > 0.0) pos[k + 1] += p * f;
}

// Uniform mass p on [ua, ub] (lattice units), ua < ub.
void add_segment(std::vector<double>& pos, double ua, double ub, double p) {
    const double width = ub - ua;
    const auto first = static_cast<std::ptrdiff_t>(std::floor(ua)) - 1;
    const auto last = static_cast<std::ptrdiff_t>(std::ceil(ub)) + 1;
    for (std::ptrdiff_t k = std::max<std::ptrdiff_t>(first, 0); k <= last && k < static_cast<std::ptrdiff_t>(pos.size()); ++k) {
        const double kk = static_cast<double>(k);
        pos[static_cast<std::size_t>(k)] += p * (hat_cdf(ub - kk) - hat_cdf(ua - kk)) / width;
    }
}

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

} // namespace

Factor project(double weight, const Rule& rule, const Marginal& marginal, double h) {
    Factor f;
    f.half_width = static_cast<std::ptrdiff_t>(std::ceil(weight * rule.sup_abs() / h)) + 1;
    std::vector<double> pos(static_cast<std::size_t>(f.half_width) + 2, 0.0);

    if (marginal.is_uniform()) {
        for (const auto& piece : rule.pieces()) {
            const double p = (piece.hi - piece.lo) / 2.0;
            const double a = weight * (piece.intercept + piece.slope * piece.lo) / h;
            const double b = weight * (piece.intercept + piece.slope * piece.hi) / h;
            if (b > a) {
                add_segment(pos, a, b, p);
            } else if (a == 0.0) {
                pos[0] += p / 2.0;  // mirrored below into the full mass at 0
            } else {
                add_atom(pos, a, p);
            }
        }
    } else {
        for (const auto& atom : marginal.atoms()) {
            if (atom.value < 0.0) continue;
            const double u = weight * rule(atom.value) / h;
            const double p = atom.probability;
            if (u == 0.0)
                pos[0] += p / 2.0;
            else
                add_atom(pos, u, p);
        }
    }

    const auto hw = static_cast<std::size_t>(f.half_width);
    f.mass.assign(2 * hw + 1, 0.0);
    for (std::size_t k = 0; k <= hw; ++k) {
        f.mass[hw + k] += pos[k];
        f.mass[hw - k] += pos[k];
    }
    return f;
}

Factor convolve(const Factor& a, const Factor& b) {
    Factor out;
    out.half_width = a.half_width + b.half_width;
    out.mass.assign(a.mass.size() + b.mass.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.mass.size(); ++i) {
        const double ai = a.mass[i];
        if (ai == 0.0) continue;
        double* dst = out.mass.data() + i;
        for (std::size_t j = 0; j < b.mass.size(); ++j) dst[j] += ai * b.mass[j];
    }
    return out;
}

void clean(std::vector<double>& mass, bool drop_roundoff) {
    if (mass.empty()) return;
    const double peak = *std::max_element(mass.begin(), mass.end());
    const double floor = drop_roundoff ? 1e-14 * peak : 0.0;
    for (auto& m : mass)
        if (m < floor) m = 0.0;
    const std::size_t n = mass.size();
    for (std::size_t k = 0; k < n / 2; ++k) {
        const double avg = 0.5 * (mass[k] + mass[n - 1 - k]);
        mass[k] = mass[n - 1 - k] = avg;
    }
    long double total = 0.0L;
    for (double m : mass) total += m;
    if (total > 0.0L)
        for (auto& m : mass) m = static_cast<double>(m / total);
}

std::vector<QuadratureNode> payoff_nodes(const Marginal& marginal, const Rule& rule, double weight, double h) {
    std::vector<QuadratureNode> nodes;
    if (!marginal.is_uniform()) {
        for (const auto& a : marginal.atoms())
            if (a.value > 0.0) nodes.push_back({a.value, a.probability});
        return nodes;
    }
    for (const auto& piece : rule.pieces()) {
        std::vector<double> cuts;
        if (piece.slope > 0.0) {
            // w(c + sθ) = (k + ½)h
            const double a = weight * (piece.intercept + piece.slope * piece.lo) / h - 0.5;
            const double b = weight * (piece.intercept + piece.slope * piece.hi) / h - 0.5;
            for (double k = std::ceil(a); k <= b; k += 1.0) {
                const double t = ((k + 0.5) * h / weight - piece.intercept) / piece.slope;
                if (t > piece.lo && t < piece.hi) cuts.push_back(t);
            }
        }
        for (const auto& q : composite_gauss_legendre(piece.lo, piece.hi, 2, 1, cuts))
            nodes.push_back({q.x, 0.5 * q.weight});  // density ½ on [-1,1]
    }
    return nodes;
}

std::size_t fft_length(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

struct FourierConvolver::Plans {
    fftw_plan forward = nullptr;
    fftw_plan inverse = nullptr;
};

FourierConvolver::FourierConvolver(std::size_t length) : n_(length), plans_(std::make_unique<Plans>()) {
    std::lock_guard lock(planner_mutex());
    double* in = fftw_alloc_real(n_);
    fftw_complex* out = fftw_alloc_complex(spectrum_size());
    const int n = static_cast<int>(n_);
    plans_->forward = fftw_plan_dft_r2c_1d(n, in, out, FFTW_ESTIMATE);
    plans_->inverse = fftw_plan_dft_c2r_1d(n, out, in, FFTW_ESTIMATE);
    fftw_free(in);
    fftw_free(out);
}

FourierConvolver::~FourierConvolver() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plans_->forward);
    fftw_destroy_plan(plans_->inverse);
}

Spectrum FourierConvolver::forward(const Factor& f) const {
    double* in = fftw_alloc_real(n_);
    fftw_complex* out = fftw_alloc_complex(spectrum_size());
    std::fill(in, in + n_, 0.0);
    std::copy(f.mass.begin(), f.mass.begin() + static_cast<std::ptrdiff_t>(std::min(n_, f.mass.size())), in);
    fftw_execute_dft_r2c(plans_->forward, in, out);
    Spectrum s(spectrum_size());
    std::memcpy(static_cast<void*>(s.data()), out, sizeof(fftw_complex) * s.size());
    fftw_free(in);
    fftw_free(out);
    return s;
}

std::vector<double> FourierConvolver::inverse(const Spectrum& s, std::size_t keep) const {
    double* out = fftw_alloc_real(n_);
    fftw_complex* in = fftw_alloc_complex(spectrum_size());
    std::memcpy(in, s.data(), sizeof(fftw_complex) * spectrum_size());
    fftw_execute_dft_c2r(plans_->inverse, in, out);
    std::vector<double> result(out, out + std::min(keep, n_));
    const double scale = 1.0 / static_cast<double>(n_);
    for (auto& v : result) v *= scale;
    fftw_free(in);
    fftw_free(out);
    return result;
}

} // namespace wvg::lattice
