#pragma once

#include <functional>

#include "polarff/transform.hpp"

namespace polarff {

/// Successive evaluation over the depth-n transform tree.
///
/// Code index i carries the transform path in its base-l digits with the
/// first-applied branch as the most significant digit: i = sum_k b_k l^(n-k).
/// Processing indices in increasing order then conditions every symbol on
/// exactly the outputs and prior symbols its subchannel is defined with.
class ScEngine {
public:
    ScEngine(const Matrix& kernel, unsigned depth);

    const Matrix& kernel() const { return kernel_; }
    unsigned depth() const { return depth_; }
    std::size_t block_length() const { return n_; }

    /// decide(i, posterior) is called once per index in increasing order and
    /// returns the symbol value committed at that index (a frozen value, an
    /// argmax decision, or the true value when estimating). Returns the
    /// encoded block consistent with the committed symbols. Indices above
    /// last_index are skipped.
    std::vector<Elem> run(const std::vector<Posterior>& use_likelihoods,
                          const std::function<Elem(std::size_t, const Posterior&)>& decide,
                          std::size_t last_index) const;

    std::vector<Elem> run(const std::vector<Posterior>& use_likelihoods,
                          const std::function<Elem(std::size_t, const Posterior&)>& decide) const {
        return run(use_likelihoods, decide, n_ - 1);
    }

    /// The matching encoder: x = u P G^(kron n) with P the digit-reversal
    /// permutation implied by the index convention.
    std::vector<Elem> encode(std::span<const Elem> u) const;

    /// Digits (b_1, ..., b_n) of a code index, first-applied branch first.
    std::vector<unsigned> index_digits(std::size_t i) const;
    std::size_t digits_index(std::span<const unsigned> digits) const;

private:
    void rec(unsigned level, std::size_t index_base, std::vector<std::vector<Posterior>>& lk_stack,
             const std::function<Elem(std::size_t, const Posterior&)>& decide,
             std::size_t last_index, std::vector<Elem>& x_out) const;

    Matrix kernel_;
    unsigned depth_;
    std::size_t l_, n_;
};

} // namespace polarff
