#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <vector>

#include "wvg/core.hpp"
#include "wvg/quadrature.hpp"

namespace wvg::lattice {

/// Mass of w·φ(Θ) on {(k - half_width)·h : k = 0..2·half_width}.
struct Factor {
    std::vector<double> mass;
    std::ptrdiff_t half_width = 0;
};

/// Mean-preserving linear ("hat") projection of w·φ(Θ) onto the lattice.
/// Exactly symmetric: the positive half is computed once and mirrored.
Factor project(double weight, const Rule& rule, const Marginal& marginal, double h);

/// Plain O(|a|·|b|) convolution; the result's half width is the sum.
Factor convolve(const Factor& a, const Factor& b);

/// Symmetrises and renormalises; with `drop_roundoff` (transform output)
/// entries below 1e-14 × max are zeroed first, otherwise only negatives.
void clean(std::vector<double>& mass, bool drop_roundoff);

using Spectrum = std::vector<std::complex<double>>;

/// Real-to-complex transforms of a fixed length, backed by FFTW.
class FourierConvolver {
public:
    explicit FourierConvolver(std::size_t length);
    ~FourierConvolver();
    FourierConvolver(const FourierConvolver&) = delete;
    FourierConvolver& operator=(const FourierConvolver&) = delete;

    std::size_t length() const noexcept { return n_; }
    std::size_t spectrum_size() const noexcept { return n_ / 2 + 1; }

    /// Zero-padded transform of the factor's mass vector.
    Spectrum forward(const Factor& f) const;
    /// Inverse transform of a product spectrum; keeps the first `keep` entries.
    std::vector<double> inverse(const Spectrum& s, std::size_t keep) const;

private:
    struct Plans;
    std::size_t n_;
    std::unique_ptr<Plans> plans_;
};

/// Nodes and weights for ∫_{(0,1]} θ·g(w·φ(θ)) dF(θ) that are exact when g is
/// linear between the lattice cell edges (k + ½)·h, as the cell-spread central
/// probability is. Uniform law: 2-point Gauss–Legendre on every segment between
/// rule breakpoints and cell-edge crossings; otherwise the positive atoms.
std::vector<QuadratureNode> payoff_nodes(const Marginal& marginal, const Rule& rule, double weight, double h);

/// Smallest power of two ≥ n.
std::size_t fft_length(std::size_t n);

} // namespace wvg::lattice
