#pragma once

#include <variant>

#include "polarff/sc.hpp"

namespace polarff {

/// Polar code over GF(q): an l x l kernel, depth n (N = l^n symbols), and the
/// frozen positions with their values. Code index i maps to transform digits
/// (i_1, ..., i_n) with the first-applied branch as the most significant
/// base-l digit, so successive decoding in increasing index order matches the
/// subchannel conditioning.
struct CodeSpec {
    FieldPtr field;
    Matrix kernel;
    unsigned depth = 0;
    std::vector<std::size_t> frozen_set; // sorted
    std::vector<Elem> frozen_values;     // aligned with frozen_set

    std::size_t block_length() const;
    std::size_t info_length() const { return block_length() - frozen_set.size(); }
    std::vector<std::size_t> info_set() const;
};

/// Per-index construction statistics (exact or Monte-Carlo).
struct IndexStats {
    double h = 0;
    double pe = 0;
    double z = 0;
};

/// Keep indices with conditional entropy below the threshold.
struct ThresholdRule {
    double epsilon;
};
/// Keep the round(R*N) indices with the smallest error probability, ties
/// broken toward the smaller index.
struct TargetRateRule {
    double rate;
};
using SelectionRule = std::variant<ThresholdRule, TargetRateRule>;

CodeSpec build_spec(FieldPtr field, const Matrix& kernel, unsigned depth,
                    std::span<const IndexStats> per_index, const SelectionRule& rule);

/// Index sets by digit arithmetic on the base-q expansion: digit sums above
/// n0 (the Reed-Muller rule) or digit-plus-one products above n0 (the
/// hyperbolic rule that maximizes minimum distance).
std::vector<std::size_t> rm_indices(unsigned q, unsigned depth, long n0);
std::vector<std::size_t> hyperbolic_indices(unsigned q, unsigned depth, long long n0);

std::vector<Elem> encode(const CodeSpec& spec, std::span<const Elem> info_symbols);

struct ScResult {
    std::vector<Elem> u;    // all N decoded symbols
    std::vector<Elem> info; // the information positions, in index order
};

/// Successive-cancellation decoding from per-use likelihood vectors
/// [W(y_j|x)]_x. Frozen positions are forced; information positions take the
/// posterior argmax with ties broken toward the smallest encoding.
ScResult sc_decode(const CodeSpec& spec, const std::vector<Posterior>& likelihoods);

double union_bound(std::span<const double> per_index_pe, std::span<const std::size_t> info_set);

/// Exhaustive minimum nonzero-codeword weight over the information set
/// (feasible for q^k up to ~2^20).
unsigned min_distance_exhaustive(const CodeSpec& spec);

} // namespace polarff
