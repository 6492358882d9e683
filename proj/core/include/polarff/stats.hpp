#pragma once

#include <optional>

#include "polarff/source.hpp"

namespace polarff {

/// Every per-source quantity used in the analysis, computed by direct
/// summation of its defining formula. Entropies are base q.
struct Stats {
    double h;                 // conditional entropy, in [0, 1]
    double z;                 // Bhattacharyya parameter, mean of z_d
    std::vector<double> z_d;  // indexed by shift d = 1..q-1
    double pe;                // MAP error probability, in [0, (q-1)/q]
    double t;                 // expected total variation to uniform, in [0, 2(q-1)/q]
    double s;                 // mean absolute Fourier mass, mean of s_w
    std::vector<double> s_w;  // indexed by frequency w = 1..q-1
    double s_max, s_min;      // extremes of s_w

    /// Channel-only quantities (defined through P(y|x), so they require
    /// uniform input). Accessors raise otherwise.
    std::optional<std::vector<double>> z_pair; // q x q table of pairwise Bhattacharyya sums
    double z_max() const;
    double z_min() const;
    double z_pair_at(Elem x, Elem xp) const;
    bool has_channel_quantities() const { return z_pair.has_value(); }

private:
    friend Stats stats(const Source&);
    std::optional<double> z_max_, z_min_;
};

Stats stats(const Source& src);

/// Closed-form bounds relating the quantities above, used by the verification
/// batteries. k-minimized expressions scan k = 1..q-1.
double pe_lower_bound_from_z(unsigned q, double z);
double pe_upper_bound_from_z(unsigned q, double z);
double t_lower_bound_from_pe(unsigned q, double pe);
double t_upper_bound_from_pe(unsigned q, double pe);
double s_lower_bound_from_pe(unsigned q, double pe);
double s_upper_bound_from_pe(unsigned q, double pe);

} // namespace polarff
