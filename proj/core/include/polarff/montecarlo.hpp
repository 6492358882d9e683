#pragma once

#include <cstdint>

#include "polarff/rng.hpp"
#include "polarff/sc.hpp"

namespace polarff {

/// One independent use of a uniform-input channel: draw an output for a
/// transmitted symbol and report the likelihood vector [W(y|x)]_x of the
/// realized output (any positive scaling is fine, posteriors are normalized
/// downstream).
class UseSampler {
public:
    virtual ~UseSampler() = default;
    virtual const Field& field() const = 0;
    /// Symmetric channels may be estimated with the all-zero input.
    virtual bool symmetric() const = 0;
    virtual void sample(Elem x, Prng& rng, Posterior& likelihood_out) const = 0;
};

/// Wraps a finite uniform-input Source as a sampler.
class SourceSampler final : public UseSampler {
public:
    explicit SourceSampler(Source src);
    const Field& field() const override { return src_.field(); }
    bool symmetric() const override { return symmetric_; }
    void sample(Elem x, Prng& rng, Posterior& likelihood_out) const override;

private:
    Source src_;
    bool symmetric_;
    std::vector<double> cdf_; // per input row, cumulative over outputs
};

struct McEstimate {
    double value = 0;
    double std_error = 0;
};

/// Monte-Carlo estimates at one subchannel. Every estimator is the sample
/// mean of a functional of the exact posterior at a drawn conditioning, so
/// all estimates are unbiased.
struct McStats {
    McEstimate h; // base-q entropy
    McEstimate z; // mean of z_d
    std::vector<McEstimate> z_d;
    McEstimate pe;
    std::size_t n_samples = 0;
};

/// Estimate H, Z_d, Z, P_e of the subchannel reached by `path` (depth =
/// path.size(), which may be zero). Fixed (seed, n_samples) give bitwise
/// identical results for any thread count.
McStats mc_subchannel_stats(const UseSampler& sampler, const Matrix& kernel,
                            std::span<const unsigned> path, std::size_t n_samples,
                            std::uint64_t seed, unsigned n_threads = 0);

/// Same, but one pass feeds every index of the depth-n tree (the traversal
/// visits each index once per sample anyway).
std::vector<McStats> mc_all_subchannels(const UseSampler& sampler, const Matrix& kernel,
                                        unsigned depth, std::size_t n_samples, std::uint64_t seed,
                                        unsigned n_threads = 0);

} // namespace polarff
