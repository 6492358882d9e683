#pragma once

#include <cstdint>
#include <span>

#include "polarff/matrix.hpp"
#include "polarff/source.hpp"

namespace polarff {

/// Probability vector over F_q.
using Posterior = std::vector<double>;

struct TransformOptions {
    bool merge = true;
    double merge_tol = 1e-12;
    std::size_t max_cells = std::size_t(1) << 26; // per-subchannel joint table entries
};

/// One level of the basic transform: l independent uses combined through an
/// invertible l x l kernel, subchannel i carrying (U_i ; U_0..U_{i-1}, Y_0..Y_{l-1}).
/// Unmerged output ids pack the conditioning tuple big-endian: the u-prefix
/// digits first (base q), then the l output digits (base |Y|).
std::vector<Source> basic_transform(const Source& src, const Matrix& g,
                                    const TransformOptions& opts = {});

/// Single subchannel of the basic transform (same output convention).
Source transform_subchannel(const Source& src, const Matrix& g, unsigned branch,
                            const TransformOptions& opts = {});

/// Recursive transform along a digit path; digits are applied first to last,
/// each level followed by output merging.
Source transform_path(const Source& src, const Matrix& g, std::span<const unsigned> path,
                      const TransformOptions& opts = {});

/// Collapse outputs with proportional likelihood columns (the posterior is a
/// sufficient statistic, so every per-source quantity is preserved).
/// Zero-mass outputs are dropped.
Source merge_equivalent_outputs(const Source& src, double tol = 1e-12);

/// Conditional law of u_i given priors on the l transformed symbols and the
/// values of u_0..u_{i-1}: P(u_i) proportional to the sum over suffixes of the
/// product of priors at (u G)_j. Cost O(q^(l-i)) per candidate.
Posterior kernel_posterior(const Matrix& g, const std::vector<Posterior>& priors,
                           std::span<const Elem> prefix, unsigned i);

struct MartingaleTrace {
    std::vector<double> h; // one entropy per sampled path
    bool exact;            // false when the Monte-Carlo fallback was used
};

struct MartingaleOptions {
    TransformOptions transform;
    std::size_t mc_samples = 20000; // fallback sample count per path
    unsigned n_threads = 0;
};

/// Depth-n conditional entropy along independently drawn uniform digit paths.
/// Uses the exact transform when the output budget allows it and falls back
/// to Monte-Carlo estimation otherwise.
MartingaleTrace martingale_trace(const Source& src, const Matrix& g, unsigned depth,
                                 std::size_t n_paths, std::uint64_t seed,
                                 const MartingaleOptions& opts = {});

} // namespace polarff
