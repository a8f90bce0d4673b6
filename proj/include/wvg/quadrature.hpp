#pragma once

#include <span>
#include <vector>

namespace wvg {

struct QuadratureNode {
    double x = 0.0;
    double weight = 0.0;
};

/// Gauss–Legendre rule of the given order on [-1,1], nodes ascending.
/// Nodes are cached per order; the returned reference stays valid.
const std::vector<QuadratureNode>& gauss_legendre(int order);

/// Composite Gauss–Legendre nodes on [lo, hi]: the interval is first cut at
/// `breaks` (points outside (lo,hi) are ignored), then each segment is split
/// into `panels` equal panels carrying an `order`-point rule.
std::vector<QuadratureNode> composite_gauss_legendre(double lo, double hi, int order, int panels,
                                                     std::span<const double> breaks = {});

} // namespace wvg
