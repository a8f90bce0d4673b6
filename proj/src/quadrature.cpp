#include "wvg/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "wvg/error.hpp"

namespace wvg {

namespace {

// Newton iteration on P_n from the Chebyshev-like initial guess.
std::vector<QuadratureNode> compute_gauss_legendre(int n) {
    std::vector<QuadratureNode> nodes(static_cast<std::size_t>(n));
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int k = 1; k <= n; ++k) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p2) / k;
            }
            dp = n * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[static_cast<std::size_t>(i)] = {-x, w};
        nodes[static_cast<std::size_t>(n - 1 - i)] = {x, w};
    }
    if (n % 2 == 1) nodes[static_cast<std::size_t>(n / 2)].x = 0.0;
    return nodes;
}

} // namespace

const std::vector<QuadratureNode>& gauss_legendre(int order) {
    if (order < 1) throw UsageError("quadrature order must be >= 1");
    static std::mutex mutex;
    static std::map<int, std::vector<QuadratureNode>> cache;
    std::lock_guard lock(mutex);
    auto it = cache.find(order);
    if (it == cache.end()) it = cache.emplace(order, compute_gauss_legendre(order)).first;
    return it->second;
}

std::vector<QuadratureNode> composite_gauss_legendre(double lo, double hi, int order, int panels,
                                                     std::span<const double> breaks) {
    if (panels < 1) throw UsageError("quadrature needs at least one panel");
    std::vector<double> cuts{lo};
    for (double b : breaks)
        if (b > lo && b < hi) cuts.push_back(b);
    cuts.push_back(hi);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    const auto& rule = gauss_legendre(order);
    std::vector<QuadratureNode> out;
    out.reserve((cuts.size() - 1) * static_cast<std::size_t>(panels) * rule.size());
    for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
        const double width = (cuts[s + 1] - cuts[s]) / panels;
        for (int p = 0; p < panels; ++p) {
            const double a = cuts[s] + p * width;
            const double mid = a + width / 2.0;
            for (const auto& q : rule) out.push_back({mid + q.x * width / 2.0, q.weight * width / 2.0});
        }
    }
    return out;
}

} // namespace wvg
