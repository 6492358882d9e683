// Acceptance suite: one test case per shipped guarantee, each printing a
// single PASS/FAIL line. Tolerances are pinned in code.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "oracles.hpp"
#include "polarff/codec.hpp"
#include "polarff/experiments.hpp"
#include "polarff/io.hpp"
#include "polarff/kernel.hpp"
#include "polarff/montecarlo.hpp"
#include "polarff/stats.hpp"

using namespace polarff;

namespace {

struct Criterion {
    std::string name;
    bool ok = true;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

    explicit Criterion(std::string n) : name(std::move(n)) {}
    void expect(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            FAIL_CHECK(name << ": " << what);
        }
    }
    void finish() {
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("[acceptance] %-22s %s  (%.1fs)\n", name.c_str(), ok ? "PASS" : "FAIL", secs);
        std::fflush(stdout);
        CHECK(ok);
    }
};

FieldPtr field_for(unsigned q) {
    switch (q) {
    case 2: return Field::make(2, 1);
    case 3: return Field::make(3, 1);
    case 4: return Field::make(2, 2);
    case 5: return Field::make(5, 1);
    case 7: return Field::make(7, 1);
    case 8: return Field::make(2, 3);
    default: raise(Errc::bad_parameter, "unexpected field size");
    }
}

Matrix binary_kernel(FieldPtr f) { return Matrix(f, 2, 2, {1, 0, 1, 1}); }

} // namespace

TEST_CASE("criterion 1: Reed-Solomon exponents") {
    Criterion crit("rs-exponents");
    for (unsigned q : {2u, 3u, 4u, 5u, 7u, 8u}) {
        auto f = field_for(q);
        const Matrix g = rs_matrix(f);
        const auto pd = partial_distances(g);
        for (unsigned i = 0; i < q; ++i) {
            crit.expect(pd.dc[i] == i + 1, "D_c mismatch at q=" + std::to_string(q));
            crit.expect(pd.ds[i] == i + 1, "D_s mismatch at q=" + std::to_string(q));
        }
        double log_qfact = 0;
        for (unsigned i = 2; i <= q; ++i) log_qfact += std::log(double(i));
        const double expect = log_qfact / (q * std::log(double(q)));
        const auto ex = exponents(pd);
        crit.expect(std::abs(ex.ec - expect) <= 1e-12, "E_c off at q=" + std::to_string(q));
        crit.expect(std::abs(ex.es - expect) <= 1e-12, "E_s off at q=" + std::to_string(q));
        if (q == 4) crit.expect(std::abs(ex.ec - 0.57312) <= 5e-6, "E_c(RS(4)) != 0.57312");
    }
    crit.finish();
}

TEST_CASE("criterion 2: polarization classifier") {
    Criterion crit("classifier");
    auto f4 = field_for(4);
    const Elem a = f4->alpha();

    crit.expect(classify_polarizing(Matrix(f4, 2, 2, {1, 0, 1, 1})) ==
                    Classification{PolarizationClass::non_polarizing_subfield, 2},
                "G_1 over GF(4) must be subfield-stuck");
    crit.expect(classify_polarizing(Matrix(f4, 2, 2, {1, 0, 1, a})) ==
                    Classification{PolarizationClass::polarizing, 0},
                "G_alpha over GF(4) must polarize");
    crit.expect(classify_polarizing(Matrix(f4, 2, 2, {1, 1, 0, 1})) ==
                    Classification{PolarizationClass::non_polarizing_identity, 0},
                "upper triangular must reduce to the identity");
    for (unsigned q : {4u, 8u})
        crit.expect(classify_polarizing(rs_matrix(field_for(q))).kind ==
                        PolarizationClass::polarizing,
                    "RS kernel must polarize");

    Prng rng(2024);
    std::size_t checked = 0;
    for (int rep = 0; rep < 500; ++rep) {
        const Matrix g = random_invertible(f4, 3, rng);
        const auto ref = classify_polarizing(g);
        std::vector<std::size_t> order{0, 1, 2};
        do {
            if (!(classify_polarizing(g, order) == ref)) {
                crit.expect(false, "classification depends on the pivot ordering");
                break;
            }
            ++checked;
        } while (std::next_permutation(order.begin(), order.end()));
    }
    crit.expect(checked == 500 * 6, "pivot sweep incomplete");
    crit.finish();
}

TEST_CASE("criterion 3: chain rule") {
    Criterion crit("chain-rule");
    Prng rng(314);
    const unsigned qs[] = {2, 3, 4};
    for (int rep = 0; rep < 200; ++rep) {
        auto f = field_for(qs[rep % 3]);
        const std::size_t l = 2 + rep % 2;
        const Source src = rep % 2 ? random_source(f, 1 + rng.next_below(4), rng)
                                   : random_channel(f, 1 + rng.next_below(4), rng);
        const Matrix g = random_invertible(f, l, rng);
        double sum = 0;
        for (const Source& sub : basic_transform(src, g)) sum += stats(sub).h;
        const double err = std::abs(sum - double(l) * stats(src).h);
        crit.expect(err <= 1e-9, "chain rule broke by " + std::to_string(err));
    }
    crit.finish();
}

TEST_CASE("criterion 4: inequality batteries") {
    Criterion crit("inequalities");
    BatteryConfig cfg;
    cfg.cases_per_family = 1000;
    cfg.seed = 20240801;
    const auto reports = verify_inequalities(cfg);
    crit.expect(reports.size() >= 10, "missing battery families");
    for (const auto& r : reports) {
        crit.expect(r.n_cases >= 1000, r.family + ": fewer than 1000 cases");
        crit.expect(r.violations == 0,
                    r.family + ": " + std::to_string(r.violations) + " violations, worst slack " +
                        std::to_string(r.worst_slack));
    }
    for (const char* tight : {"qsc_tightness", "subset_tightness"}) {
        const auto it = std::find_if(reports.begin(), reports.end(),
                                     [&](const FamilyReport& r) { return r.family == tight; });
        crit.expect(it != reports.end() && it->worst_slack >= -1e-9,
                    std::string(tight) + " beyond 1e-9");
    }
    crit.finish();
}

TEST_CASE("criterion 5: non-polarizing counterexample") {
    Criterion crit("counterexample");

    for (unsigned depth = 0; depth <= 16; ++depth) {
        const auto hist = bec_pair_counterexample(0.2, 0.7, depth);
        crit.expect(std::abs(hist.mean() - 0.45) <= 1e-12,
                    "martingale mean broke at depth " + std::to_string(depth));
    }

    const auto hist16 = bec_pair_counterexample(0.2, 0.7, 16);
    const double mid16 = hist16.band_mass(0.4, 0.6);
    crit.expect(std::abs(mid16 - 0.5) <= 0.05,
                "middle band mass " + std::to_string(mid16) + " not within 0.05 of 0.5");

    // contrast arm: the polarizing kernel empties the wide middle band
    auto f4 = field_for(4);
    const Source src = bec_pair_source(f4, 0.2, 0.7);
    const Matrix g_alpha(f4, 2, 2, {1, 0, 1, f4->alpha()});
    SourceSampler sampler(src);
    const unsigned depth = 6;
    const auto base6 = bec_pair_counterexample(0.2, 0.7, depth);
    const double base_mid = base6.band_mass(0.1, 0.9, /*open=*/true);

    double alpha_mid = 0;
    for (unsigned bits = 0; bits < (1u << depth); ++bits) {
        std::vector<unsigned> path(depth);
        for (unsigned k = 0; k < depth; ++k) path[k] = (bits >> (depth - 1 - k)) & 1;
        const auto est = mc_subchannel_stats(sampler, g_alpha, path, 4000, 777 + bits);
        alpha_mid += est.h.value > 0.1 && est.h.value < 0.9;
    }
    alpha_mid /= double(1u << depth);
    crit.expect(alpha_mid <= base_mid / 5.0,
                "polarizing-kernel middle mass " + std::to_string(alpha_mid) +
                    " vs componentwise " + std::to_string(base_mid));
    crit.finish();
}

TEST_CASE("criterion 6: speed of polarization") {
    Criterion crit("speed");
    auto f2 = field_for(2);
    const Source bec = erasure(f2, 0.5);
    const Matrix g1 = binary_kernel(f2);

    const double lo = speed_empiric(g1, bec, 20, 0.4);
    crit.expect(lo >= 0.35 && lo <= 0.55,
                "fraction at threshold 0.4 is " + std::to_string(lo));
    const double hi = speed_empiric(g1, bec, 20, 0.9);
    crit.expect(hi < 0.05, "fraction at threshold 0.9 is " + std::to_string(hi));
    crit.finish();
}

TEST_CASE("criterion 7: AWGN comparison at desk scale") {
    Criterion crit("awgn-fig2");
    ExperimentConfig cfg;
    cfg.sigma = 0.97865;
    cfg.samples = 20000;
    cfg.seed = 424242;
    const auto points = run_fig2(cfg);

    // index the curves: (arm, bits) -> union bound by rate
    auto curve = [&](const std::string& arm, unsigned bits) {
        std::vector<std::pair<double, double>> c;
        for (const auto& p : points)
            if (p.arm == arm && p.blocklength_bits == bits) c.push_back({p.rate, p.union_bound});
        std::sort(c.begin(), c.end());
        return c;
    };

    for (auto [qbits, qn] : {std::pair<unsigned, unsigned>{128, 64}, {512, 256}}) {
        const auto q_curve = curve("quaternary", qbits);
        const auto b_curve = curve("binary", qbits);
        crit.expect(q_curve.size() == qn, "quaternary curve size");
        crit.expect(b_curve.size() == 2 * qn, "binary curve size");
        std::size_t compared = 0;
        for (const auto& [rate, qb] : q_curve) {
            if (rate < 0.15 || rate > 0.4) continue;
            // binary grid contains every quaternary rate: rate = k/qn = 2k/(2qn)
            const std::size_t j = std::size_t(std::llround(rate * 2 * qn));
            const double bb = b_curve[j - 1].second;
            crit.expect(qb < bb, "quaternary not below binary at rate " + std::to_string(rate));
            ++compared;
        }
        crit.expect(compared >= 10, "too few comparable rate points");
    }
    crit.finish();
}

TEST_CASE("criterion 8: codec round-trip and block error") {
    Criterion crit("codec");
    Prng rng(987);

    // noiseless recovery, q in {2, 4}, n <= 3, 100 random messages each
    for (auto [p, m] : {std::pair<unsigned, unsigned>{2, 1}, {2, 2}}) {
        auto f = Field::make(p, m);
        for (const Matrix& g : {binary_kernel(f), rs_matrix(f)}) {
            for (unsigned depth = 1; depth <= 3; ++depth) {
                std::size_t n = 1;
                for (unsigned k = 0; k < depth; ++k) n *= g.rows();
                if (n > 64) continue;
                std::vector<std::size_t> frozen;
                for (std::size_t i = 0; i < n / 3; ++i) frozen.push_back(i * 2);
                CodeSpec spec{f, g, depth, frozen, std::vector<Elem>(frozen.size(), 0)};
                for (int rep = 0; rep < 100; ++rep) {
                    std::vector<Elem> msg(spec.info_length());
                    for (auto& e : msg) e = Elem(rng.next_below(f->q()));
                    const auto x = encode(spec, msg);
                    std::vector<Posterior> lk(n, Posterior(f->q(), 0.0));
                    for (std::size_t j = 0; j < n; ++j) lk[j][x[j]] = 1.0;
                    const auto res = sc_decode(spec, lk);
                    if (res.info != msg) {
                        crit.expect(false, "noiseless round-trip failed");
                        break;
                    }
                }
            }
        }
    }

    // encoder equals u -> u P G^(kron n), exhaustively where q^N allows
    for (auto [p, m] : {std::pair<unsigned, unsigned>{2, 1}, {2, 2}}) {
        auto f = Field::make(p, m);
        const unsigned q = f->q();
        for (const Matrix& g : {binary_kernel(f), rs_matrix(f)}) {
            const std::size_t l = g.rows();
            for (unsigned depth = 1; depth <= 2; ++depth) {
                std::size_t n = 1;
                for (unsigned k = 0; k < depth; ++k) n *= l;
                if (n > 16) continue;
                const ScEngine engine(g, depth);
                const double total = std::pow(double(q), double(n));
                const bool exhaustive = total <= 65536;
                const std::size_t reps = exhaustive ? std::size_t(total) : n + 1000;
                for (std::size_t rep = 0; rep < reps; ++rep) {
                    std::vector<Elem> u(n, 0);
                    if (exhaustive) {
                        std::size_t v = rep;
                        for (std::size_t j = 0; j < n; ++j) {
                            u[j] = Elem(v % q);
                            v /= q;
                        }
                    } else if (rep < n) {
                        u[rep] = 1; // basis vectors first, then random fill
                    } else {
                        for (auto& e : u) e = Elem(rng.next_below(q));
                    }
                    std::vector<Elem> urev(n);
                    for (std::size_t j = 0; j < n; ++j)
                        urev[oracle::digit_reverse(j, l, depth)] = u[j];
                    if (engine.encode(u) != oracle::kron_power_times(g, depth, urev)) {
                        crit.expect(false, "encoder disagrees with the Kronecker route");
                        break;
                    }
                }
            }
        }
    }

    // empirical SC block error within the union bound on qsc(GF(4), 0.05)
    {
        auto f4 = Field::make(2, 2);
        const Matrix g = rs_matrix(f4);
        const unsigned depth = 3;
        const Source ch = qsc(f4, 0.05);
        SourceSampler sampler(ch);

        const auto per_index = mc_all_subchannels(sampler, g, depth, 20000, 1234);
        std::vector<IndexStats> st(per_index.size());
        std::vector<double> pe(per_index.size());
        for (std::size_t i = 0; i < per_index.size(); ++i) {
            st[i] = {per_index[i].h.value, per_index[i].pe.value, per_index[i].z.value};
            pe[i] = per_index[i].pe.value;
        }
        const auto spec = build_spec(f4, g, depth, st, TargetRateRule{0.5});
        const double bound = union_bound(pe, spec.info_set());

        const std::size_t n = spec.block_length();
        const std::size_t trials = 10000;
        std::size_t errors = 0;
        Prng trial_rng(20240811);
        std::vector<Posterior> lk(n);
        for (std::size_t t = 0; t < trials; ++t) {
            std::vector<Elem> msg(spec.info_length());
            for (auto& e : msg) e = Elem(trial_rng.next_below(4));
            const auto x = encode(spec, msg);
            for (std::size_t j = 0; j < n; ++j) sampler.sample(x[j], trial_rng, lk[j]);
            const auto res = sc_decode(spec, lk);
            errors += res.info != msg;
        }
        const double emp = double(errors) / double(trials);
        const double sigma = std::sqrt(std::max(emp * (1 - emp), 1.0 / trials) / double(trials));
        crit.expect(emp <= bound + 3 * sigma,
                    "block error " + std::to_string(emp) + " above bound " + std::to_string(bound));
    }
    crit.finish();
}
