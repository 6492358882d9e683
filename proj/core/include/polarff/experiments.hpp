#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "polarff/awgn.hpp"
#include "polarff/codec.hpp"
#include "polarff/stats.hpp"

namespace polarff {

/// Key-value experiment configuration ("key = value" lines, '#' comments).
struct ExperimentConfig {
    double sigma = 0.97865;
    std::uint64_t seed = 1;
    std::size_t samples = 20000;
    bool full = false; // extend to the 2^11/2^13-bit blocklengths
    unsigned n_threads = 0;
    std::string out_path; // empty = stdout

    static ExperimentConfig from_stream(std::istream& in);
    static ExperimentConfig from_file(const std::string& path);
};

struct Fig2Point {
    std::string arm;           // "binary" or "quaternary"
    unsigned blocklength_bits; // matched in bits across arms
    double rate;
    double union_bound;
};

/// AWGN comparison: binary kernel [[1,0],[1,1]] against the quaternary
/// Reed-Solomon kernel at matched bit blocklengths (2^7 vs 4^3, 2^9 vs 4^4,
/// and with `full` also 2^11 vs 4^5, 2^13 vs 4^6). Per-index error
/// probabilities come from Monte-Carlo estimation; each curve point at rate
/// k/N is the sum of the k smallest estimates.
std::vector<Fig2Point> run_fig2(const ExperimentConfig& config);
void write_fig2_csv(std::ostream& out, const std::vector<Fig2Point>& points);

struct BecPairHistogram {
    std::vector<double> h; // one entropy per digit path, base 4
    double mean() const;
    double band_mass(double lo, double hi, bool open = false) const;
};

/// Exact entropy histogram for the quaternary source made of two independent
/// binary erasure components carried on the basis {1, alpha}, transformed
/// with a kernel whose entries stay in the prime subfield. Each component
/// follows the scalar recursions z -> 2z - z^2 (branch 0) and z -> z^2
/// (branch 1); the path entropy is (z_0 + z_1) / 2.
BecPairHistogram bec_pair_counterexample(const Matrix& kernel, double eps0, double eps1,
                                         unsigned depth);
BecPairHistogram bec_pair_counterexample(double eps0, double eps1, unsigned depth);

/// The underlying F_4 source itself, for cross-checks and sampling.
Source bec_pair_source(FieldPtr f4, double eps0, double eps1);

/// Fraction of depth-n indices whose Bhattacharyya parameter satisfies
/// log_l(-log2 Z_n) >= threshold * n, evaluated in the log domain on the
/// exact erasure recursion. The kernel must reduce to [[1,0],[1,1]] and the
/// channel must be an erasure channel.
double speed_empiric(const Matrix& kernel, const Source& channel, unsigned depth,
                     double threshold);

struct BatteryConfig {
    std::size_t cases_per_family = 1000;
    std::uint64_t seed = 7;
    unsigned n_threads = 0;
};

struct FamilyReport {
    std::string family;
    std::size_t n_cases = 0;
    std::size_t violations = 0;
    double worst_slack = 0;       // most negative margin observed (>= 0 is clean)
    std::string violating_source; // serialized source on failure
    bool pass() const { return violations == 0; }
};

/// Every closed-form inequality and tightness family, checked on randomized
/// batteries. A negative slack beyond tolerance is a violation.
std::vector<FamilyReport> verify_inequalities(const BatteryConfig& config);
void write_battery_report(std::ostream& out, const std::vector<FamilyReport>& reports);

/// Deterministic random-source batteries shared by tests and the verifier.
Source random_source(FieldPtr field, std::size_t output_size, Prng& rng);
Source random_channel(FieldPtr field, std::size_t output_size, Prng& rng);
Matrix random_invertible(FieldPtr field, std::size_t l, Prng& rng);

} // namespace polarff
