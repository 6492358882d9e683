#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "polarff/gf.hpp"

namespace polarff {

/// Joint distribution of (X, Y) on F_q x {0, ..., output_size-1}, stored
/// row-major as joint[x * output_size + y]. Immutable after validation.
class Source {
public:
    enum class Validate { strict, renormalize };

    Source(FieldPtr field, std::size_t output_size, std::vector<double> joint,
           Validate mode = Validate::strict);

    const Field& field() const { return *field_; }
    FieldPtr field_ptr() const { return field_; }
    std::size_t output_size() const { return output_size_; }
    double joint(Elem x, std::size_t y) const { return joint_[std::size_t(x) * output_size_ + y]; }
    const std::vector<double>& joint_table() const { return joint_; }
    bool uniform_input() const { return uniform_input_; }

    double output_mass(std::size_t y) const;
    /// Posterior [P(x|y)]_x; uniform for zero-mass outputs.
    std::vector<double> posterior(std::size_t y) const;
    std::vector<double> input_marginal() const;

    /// Optional semantic labels for outputs (e.g. subsets); informational only.
    std::vector<std::string> output_labels;

private:
    FieldPtr field_;
    std::size_t output_size_;
    std::vector<double> joint_;
    bool uniform_input_;
};

/// Validated construction from a q x output_size table; rejects negative
/// entries and tables whose total mass is off by more than 1e-12.
Source source_from_joint(FieldPtr field, std::size_t output_size, std::vector<double> joint);

/// q-ary symmetric channel with uniform input: flips to each other symbol
/// with total probability eps, eps in [0, (q-1)/q].
Source qsc(FieldPtr field, double eps);

/// q-ary erasure channel with uniform input; output q is the erasure symbol.
Source erasure(FieldPtr field, double eps);

/// Channel whose output is a subset of F_q containing the input, of size k
/// with probability 1-eps and k+1 with probability eps; 1 <= k <= q-1.
Source subset_channel(FieldPtr field, unsigned k, double eps);

/// Turn a source (N, Z) into the uniform-input symmetric channel
/// (X, (X+N, Z)); output id = s * |Z| + z for the shifted symbol s.
Source symmetrize(const Source& src);

/// Symmetry test: for every input shift there must be an output permutation
/// aligning the likelihood rows; decided by canonical sorting of likelihood
/// columns. Requires uniform input.
bool is_symmetric(const Source& src, double tol = 1e-9);

/// Remap the input symbol x to r*x + d, r nonzero.
Source relabel(const Source& src, Elem r, Elem d);

Source permute_outputs(const Source& src, std::span<const std::size_t> perm);

} // namespace polarff
