#pragma once

#include "polarff/montecarlo.hpp"

namespace polarff {

/// Binary-input AWGN carrying one GF(2^m) symbol per m BPSK uses. The symbol
/// is split into bits on the basis {1, alpha, ..., alpha^(m-1)}; bit b maps to
/// the signal 1 - 2b, and each use adds N(0, sigma^2) noise.
class AwgnSampler final : public UseSampler {
public:
    AwgnSampler(FieldPtr field, double sigma);

    const Field& field() const override { return *field_; }
    bool symmetric() const override { return true; }
    void sample(Elem x, Prng& rng, Posterior& likelihood_out) const override;

    double sigma() const { return sigma_; }
    /// Bits of a symbol on the fixed basis, lowest basis element first.
    const std::vector<std::uint8_t>& bits(Elem x) const { return bits_[x]; }

    /// Likelihood vector for an explicit noise realization, evaluated as one
    /// m-dimensional Gaussian (reference path for tests).
    void likelihood_from_observation(std::span<const double> y, Posterior& out) const;

private:
    FieldPtr field_;
    double sigma_;
    std::vector<std::vector<std::uint8_t>> bits_; // per symbol, m bits
};

} // namespace polarff
