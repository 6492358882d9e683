#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "oracles.hpp"
#include "polarff/experiments.hpp"
#include "polarff/stats.hpp"

using namespace polarff;

TEST_CASE("config parsing") {
    std::istringstream in("# comment\nsigma = 0.9\nseed = 42\nsamples = 2000\nfull = true\n");
    const auto cfg = ExperimentConfig::from_stream(in);
    CHECK(cfg.sigma == doctest::Approx(0.9));
    CHECK(cfg.seed == 42);
    CHECK(cfg.samples == 2000);
    CHECK(cfg.full);

    std::istringstream bad("sigma 0.9\n");
    CHECK_THROWS_AS(ExperimentConfig::from_stream(bad), Error);
    std::istringstream unknown("velocity = 3\n");
    CHECK_THROWS_AS(ExperimentConfig::from_stream(unknown), Error);
}

TEST_CASE("awgn likelihoods factor over the bit uses") {
    auto f4 = Field::make(2, 2);
    const AwgnSampler sampler(f4, 0.8);
    CHECK(sampler.symmetric());

    // per-symbol likelihood equals the product of per-bit likelihoods
    Prng rng(2);
    for (int rep = 0; rep < 200; ++rep) {
        const double y[2] = {2 * rng.next_double() - 1 + 0.3, 2 * rng.next_double() - 1};
        Posterior joint;
        sampler.likelihood_from_observation(std::span<const double>(y, 2), joint);

        auto bit_lk = [&](double obs, unsigned bit) {
            const double s = bit ? -1.0 : 1.0;
            return std::exp(-(obs - s) * (obs - s) / (2 * 0.8 * 0.8));
        };
        double norm_joint = 0, norm_prod = 0;
        std::vector<double> prod(4);
        for (unsigned x = 0; x < 4; ++x) {
            prod[x] = bit_lk(y[0], sampler.bits(Elem(x))[0]) * bit_lk(y[1], sampler.bits(Elem(x))[1]);
            norm_prod += prod[x];
            norm_joint += joint[x];
        }
        for (unsigned x = 0; x < 4; ++x)
            CHECK(joint[x] / norm_joint == doctest::Approx(prod[x] / norm_prod).epsilon(1e-10));
    }

    // every symbol has a distinct bit pattern
    std::set<std::pair<int, int>> seen;
    for (unsigned x = 0; x < 4; ++x) seen.insert({sampler.bits(Elem(x))[0], sampler.bits(Elem(x))[1]});
    CHECK(seen.size() == 4);
}

TEST_CASE("bec pair histogram basics") {
    // zero erasure: everything is already polarized at H = 0
    const auto zero = bec_pair_counterexample(0.0, 0.0, 6);
    for (double h : zero.h) CHECK(h == doctest::Approx(0.0));

    // the mean is the starting entropy at every depth
    for (unsigned depth = 0; depth <= 12; ++depth) {
        const auto hist = bec_pair_counterexample(0.2, 0.7, depth);
        CHECK(hist.h.size() == (std::size_t(1) << depth));
        CHECK(std::abs(hist.mean() - 0.45) <= 1e-12);
    }

    // equal components reduce to a single erasure recursion
    const unsigned depth = 8;
    const auto eq = bec_pair_counterexample(0.4, 0.4, depth);
    const auto zs = oracle::bec_all_indices(0.4, depth);
    REQUIRE(eq.h.size() == zs.size());
    auto sorted_zs(zs);
    auto sorted_h(eq.h);
    std::sort(sorted_zs.begin(), sorted_zs.end());
    std::sort(sorted_h.begin(), sorted_h.end());
    for (std::size_t i = 0; i < zs.size(); ++i)
        CHECK(sorted_h[i] == doctest::Approx(sorted_zs[i]).epsilon(1e-12));

    CHECK_THROWS_AS(bec_pair_counterexample(0.2, 0.7, 21), Error);
    auto f4 = Field::make(2, 2);
    CHECK_THROWS_AS(
        bec_pair_counterexample(Matrix(f4, 2, 2, {1, 0, f4->alpha(), 1}), 0.2, 0.7, 4), Error);
    // a column permutation of the kernel is still fine
    const auto perm = bec_pair_counterexample(Matrix(f4, 2, 2, {0, 1, 1, 1}), 0.2, 0.7, 4);
    CHECK(std::abs(perm.mean() - 0.45) <= 1e-12);
}

TEST_CASE("bec pair source matches the scalar recursion through the generic transform") {
    auto f4 = Field::make(2, 2);
    const Source src = bec_pair_source(f4, 0.2, 0.7);
    CHECK(src.uniform_input());
    CHECK(is_symmetric(src));
    CHECK(stats(src).h == doctest::Approx(0.45).epsilon(1e-12));

    const Matrix g1(f4, 2, 2, {1, 0, 1, 1});
    for (unsigned bits = 0; bits < 8; ++bits) {
        const std::vector<unsigned> path{bits >> 2 & 1, bits >> 1 & 1, bits & 1};
        const double expect =
            0.5 * (oracle::bec_path(0.2, path) + oracle::bec_path(0.7, path));
        const Source sub = transform_path(src, g1, path);
        CHECK(stats(sub).h == doctest::Approx(expect).epsilon(1e-10));
    }
}

TEST_CASE("speed fractions from the log-domain recursion") {
    auto f2 = Field::make(2, 1);
    const Matrix g1(f2, 2, 2, {1, 0, 1, 1});

    // eps = 0: all indices are perfect, fraction 1 by convention
    CHECK(speed_empiric(g1, erasure(f2, 0.0), 10, 0.4) == doctest::Approx(1.0));

    // small depth cross-check against the direct recursion
    const unsigned depth = 10;
    const auto zs = oracle::bec_all_indices(0.5, depth);
    for (double thr : {0.2, 0.4}) {
        std::size_t count = 0;
        for (double z : zs)
            count += z > 0 && -std::log2(z) >= std::exp2(thr * depth);
        const double frac = speed_empiric(g1, erasure(f2, 0.5), depth, thr);
        CHECK(frac == doctest::Approx(double(count) / double(zs.size())));
    }

    CHECK_THROWS_AS(speed_empiric(g1, qsc(Field::make(2, 2), 0.2), 4, 0.4), Error);
}

TEST_CASE("martingale contrast: the polarizing kernel clears the middle band") {
    auto f4 = Field::make(2, 2);
    const Source src = bec_pair_source(f4, 0.2, 0.7);
    const Matrix g_alpha(f4, 2, 2, {1, 0, 1, f4->alpha()});

    // at a small depth the exact transform is affordable; the polarizing
    // kernel must already beat the component-wise one
    const unsigned depth = 4;
    const auto base = bec_pair_counterexample(0.2, 0.7, depth);
    double alpha_mid = 0;
    for (unsigned bits = 0; bits < (1u << depth); ++bits) {
        std::vector<unsigned> path(depth);
        for (unsigned k = 0; k < depth; ++k) path[k] = (bits >> (depth - 1 - k)) & 1;
        const double h = stats(transform_path(src, g_alpha, path)).h;
        alpha_mid += h > 0.1 && h < 0.9;
    }
    alpha_mid /= double(1u << depth);
    CHECK(alpha_mid < base.band_mass(0.1, 0.9, true));
}

TEST_CASE("fig2 extremes behave like pure noise and no noise") {
    ExperimentConfig cfg;
    cfg.samples = 1000;
    cfg.seed = 5;

    cfg.sigma = 1e-3; // essentially noiseless: bounds collapse
    {
        auto pts = run_fig2(cfg);
        for (const auto& p : pts)
            if (p.rate < 1.0) CHECK(p.union_bound < 1e-6);
    }

    cfg.sigma = 1e3; // pure noise: every index is bad
    {
        auto pts = run_fig2(cfg);
        for (const auto& p : pts) {
            const double q = p.arm == "binary" ? 2.0 : 4.0;
            const std::size_t n_symbols =
                p.arm == "binary" ? p.blocklength_bits : p.blocklength_bits / 2;
            const double expect = (q - 1) / q * p.rate * double(n_symbols);
            CHECK(p.union_bound >= 0.8 * expect);
        }
    }
}

TEST_CASE("fig2 csv output is deterministic for a fixed seed") {
    ExperimentConfig cfg;
    cfg.samples = 1000;
    cfg.seed = 9;
    cfg.sigma = 0.97865;
    const auto a = run_fig2(cfg);
    cfg.n_threads = 2;
    const auto b = run_fig2(cfg);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].union_bound == b[i].union_bound);
        CHECK(a[i].rate == b[i].rate);
    }
    std::ostringstream os;
    write_fig2_csv(os, a);
    CHECK(os.str().substr(0, 38) == "arm,blocklength_bits,rate,union_bound\n");
}
