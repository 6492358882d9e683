#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "oracles.hpp"
#include "polarff/experiments.hpp"
#include "polarff/io.hpp"
#include "polarff/stats.hpp"

using namespace polarff;

TEST_CASE("source validation") {
    auto f2 = Field::make(2, 1);

    // noiseless channel: y = x
    Source noiseless = source_from_joint(f2, 2, {0.5, 0.0, 0.0, 0.5});
    CHECK(noiseless.uniform_input());

    CHECK_THROWS_AS(source_from_joint(f2, 2, {0.5, 0.0, 0.0, 0.4}), Error); // sums to 0.9
    CHECK_THROWS_AS(source_from_joint(f2, 2, {0.6, -0.1, 0.0, 0.5}), Error);

    // 2x3 table: valid source with |Y| = 3
    Source s23 = source_from_joint(f2, 3, {0.2, 0.1, 0.2, 0.1, 0.2, 0.2});
    CHECK(s23.output_size() == 3);
    CHECK(s23.uniform_input());
}

TEST_CASE("erasure channel closed forms") {
    auto f4 = Field::make(2, 2);
    const Stats st = stats(erasure(f4, 0.3));
    CHECK(st.h == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(st.z == doctest::Approx(0.3).epsilon(1e-12));
    for (double zd : st.z_d) CHECK(zd == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(st.pe == doctest::Approx(0.225).epsilon(1e-12));
    CHECK(st.t == doctest::Approx(1.05).epsilon(1e-12));
    CHECK(st.s == doctest::Approx(0.7).epsilon(1e-12));
}

TEST_CASE("degenerate channels") {
    for (auto [p, m] : {std::pair<unsigned, unsigned>{2, 1}, {2, 2}, {3, 1}, {5, 1}}) {
        auto f = Field::make(p, m);
        const unsigned q = f->q();

        const Stats noiseless = stats(erasure(f, 0.0));
        CHECK(noiseless.h == doctest::Approx(0.0));
        CHECK(noiseless.z == doctest::Approx(0.0));
        CHECK(noiseless.pe == doctest::Approx(0.0));
        CHECK(noiseless.t == doctest::Approx(2.0 * (q - 1) / q).epsilon(1e-12));
        CHECK(noiseless.s == doctest::Approx(1.0).epsilon(1e-12));

        // output-independent channel
        std::vector<double> flat(std::size_t(q) * 1, 1.0 / q);
        const Stats useless = stats(source_from_joint(f, 1, flat));
        CHECK(useless.h == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(useless.z == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(useless.pe == doctest::Approx(double(q - 1) / q).epsilon(1e-12));
        CHECK(useless.t == doctest::Approx(0.0));
        CHECK(useless.s == doctest::Approx(0.0));
    }
}

TEST_CASE("q-ary symmetric channel") {
    auto f4 = Field::make(2, 2);
    const Source ch = qsc(f4, 0.3);
    const Stats st = stats(ch);
    CHECK(st.pe == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(st.z == doctest::Approx(2.0 / 3 * 0.3 + 2 * std::sqrt(0.3 * 0.7 / 3)).epsilon(1e-12));
    CHECK(st.z == doctest::Approx(oracle::qsc_z(4, 0.3)).epsilon(1e-12));
    CHECK(is_symmetric(ch));

    CHECK_THROWS_AS(qsc(f4, 0.8), Error); // above (q-1)/q
}

TEST_CASE("subset channel") {
    auto f4 = Field::make(2, 2);
    const Stats trivial = stats(subset_channel(f4, 1, 0.0));
    CHECK(trivial.z == doctest::Approx(0.0));
    CHECK(trivial.pe == doctest::Approx(0.0));

    for (unsigned q : {3u, 4u, 5u}) {
        auto f = Field::make(q == 4 ? 2 : q, q == 4 ? 2 : 1);
        for (unsigned k = 1; k < q; ++k)
            for (double eps : {0.0, 0.25, 0.8, 1.0}) {
                const Stats st = stats(subset_channel(f, k, eps));
                CHECK(st.z == doctest::Approx((k - 1 + eps) / (q - 1)).epsilon(1e-9));
                CHECK(st.pe ==
                      doctest::Approx((double(k) * k - 1 + eps) / (k * (k + 1))).epsilon(1e-9));
            }
    }
    CHECK_THROWS_AS(subset_channel(f4, 0, 0.5), Error);
    CHECK_THROWS_AS(subset_channel(f4, 4, 0.5), Error);
}

TEST_CASE("stats ranges and internal consistency on random sources") {
    Prng rng(5);
    for (int rep = 0; rep < 300; ++rep) {
        auto f = Field::make(rep % 2 ? 3 : 2, rep % 2 ? 1 : 2);
        const unsigned q = f->q();
        const Source src = rep % 3 ? random_source(f, 1 + rng.next_below(5), rng)
                                   : random_channel(f, 1 + rng.next_below(5), rng);
        const Stats st = stats(src);
        CHECK(st.h >= -1e-12);
        CHECK(st.h <= 1 + 1e-12);
        CHECK(st.z >= -1e-12);
        CHECK(st.z <= 1 + 1e-12);
        CHECK(st.pe >= -1e-12);
        CHECK(st.pe <= double(q - 1) / q + 1e-12);
        CHECK(st.t >= -1e-12);
        CHECK(st.t <= 2.0 * (q - 1) / q + 1e-12);
        CHECK(st.s >= -1e-12);
        CHECK(st.s <= 1 + 1e-12);

        double zmean = 0;
        for (double zd : st.z_d) zmean += zd;
        CHECK(st.z == doctest::Approx(zmean / (q - 1)).epsilon(1e-12));
        CHECK(st.s_min <= st.s + 1e-12);
        CHECK(st.s_max >= st.s - 1e-12);

        if (src.uniform_input()) {
            CHECK(st.z_min() <= st.z + 1e-9);
            CHECK(st.z_max() >= st.z - 1e-9);
        } else {
            CHECK_THROWS_AS((void)st.z_max(), Error);
        }
        CHECK(st.h == doctest::Approx(oracle::naive_conditional_entropy(src)).epsilon(1e-12));
    }
}

TEST_CASE("symmetrize preserves every shared statistic and yields a symmetric channel") {
    Prng rng(9);

    // deterministic source N = 0
    auto f2 = Field::make(2, 1);
    const Source det = source_from_joint(f2, 1, {1.0, 0.0});
    CHECK(stats(symmetrize(det)).h == doctest::Approx(0.0));

    // uniform N independent of Z
    const Source unif = source_from_joint(f2, 1, {0.5, 0.5});
    CHECK(stats(symmetrize(unif)).h == doctest::Approx(1.0).epsilon(1e-12));

    for (int rep = 0; rep < 60; ++rep) {
        auto f = Field::make(rep % 2 ? 3 : 2, rep % 2 ? 1 : 2);
        const Source src = random_source(f, 1 + rng.next_below(3), rng);
        const Source sym = symmetrize(src);
        CHECK(sym.uniform_input());
        CHECK(is_symmetric(sym));

        const Stats a = stats(src), b = stats(sym);
        CHECK(b.h == doctest::Approx(a.h).epsilon(1e-12));
        CHECK(b.z == doctest::Approx(a.z).epsilon(1e-12));
        CHECK(b.pe == doctest::Approx(a.pe).epsilon(1e-12));
        CHECK(b.t == doctest::Approx(a.t).epsilon(1e-12));
        CHECK(b.s == doctest::Approx(a.s).epsilon(1e-12));
        for (unsigned d = 0; d + 1 < f->q(); ++d) {
            CHECK(b.z_d[d] == doctest::Approx(a.z_d[d]).epsilon(1e-12));
            CHECK(b.s_w[d] == doctest::Approx(a.s_w[d]).epsilon(1e-12));
        }
    }
}

TEST_CASE("symmetry decision") {
    auto f4 = Field::make(2, 2);
    CHECK(is_symmetric(qsc(f4, 0.2)));
    CHECK(is_symmetric(erasure(f4, 0.4)));

    // break symmetry: zero one input's row differently
    std::vector<double> joint(4 * 5, 0.0);
    for (unsigned x = 0; x < 4; ++x) {
        joint[x * 5 + x] = 0.2;
        joint[x * 5 + 4] = 0.05;
    }
    joint[0 * 5 + 4] = 0.0;
    joint[0 * 5 + 1] += 0.05; // keep the input marginal uniform
    const Source crooked(f4, 5, std::move(joint), Source::Validate::renormalize);
    CHECK(crooked.uniform_input());
    CHECK(!is_symmetric(crooked));

    const Source nonuniform = source_from_joint(f4, 1, {0.4, 0.3, 0.2, 0.1});
    CHECK_THROWS_AS(is_symmetric(nonuniform), Error);
}

TEST_CASE("relabel and output permutation invariances") {
    Prng rng(13);
    auto f4 = Field::make(2, 2);

    const Source base = qsc(f4, 0.2);
    const Stats ref = stats(base);

    // identity relabel
    CHECK(stats(relabel(base, 1, 0)).h == doctest::Approx(ref.h).epsilon(1e-12));

    const Source moved = relabel(base, f4->alpha(), 1);
    const Stats st = stats(moved);
    CHECK(st.h == doctest::Approx(ref.h).epsilon(1e-12));
    CHECK(st.z == doctest::Approx(ref.z).epsilon(1e-12));
    CHECK(st.pe == doctest::Approx(ref.pe).epsilon(1e-12));
    CHECK(st.t == doctest::Approx(ref.t).epsilon(1e-12));
    CHECK(st.s == doctest::Approx(ref.s).epsilon(1e-12));
    CHECK(st.s_max == doctest::Approx(ref.s_max).epsilon(1e-12));
    CHECK(st.s_min == doctest::Approx(ref.s_min).epsilon(1e-12));

    for (int rep = 0; rep < 40; ++rep) {
        auto f = Field::make(rep % 2 ? 5 : 2, rep % 2 ? 1 : 2);
        const Source src = random_source(f, 1 + rng.next_below(4), rng);
        const Stats a = stats(src);
        const Elem r = Elem(1 + rng.next_below(f->q() - 1));
        const Elem d = Elem(rng.next_below(f->q()));
        const Stats b = stats(relabel(src, r, d));
        CHECK(b.h == doctest::Approx(a.h).epsilon(1e-12));
        CHECK(b.z == doctest::Approx(a.z).epsilon(1e-12));
        CHECK(b.pe == doctest::Approx(a.pe).epsilon(1e-12));
        CHECK(b.t == doctest::Approx(a.t).epsilon(1e-12));
        CHECK(b.s == doctest::Approx(a.s).epsilon(1e-12));
        CHECK(b.s_max == doctest::Approx(a.s_max).epsilon(1e-12));
        CHECK(b.s_min == doctest::Approx(a.s_min).epsilon(1e-12));
        // the s_w vector is permuted by w -> r w
        auto sa = a.s_w, sb = b.s_w;
        std::sort(sa.begin(), sa.end());
        std::sort(sb.begin(), sb.end());
        for (std::size_t i = 0; i < sa.size(); ++i)
            CHECK(sb[i] == doctest::Approx(sa[i]).epsilon(1e-12));

        std::vector<std::size_t> perm(src.output_size());
        std::iota(perm.begin(), perm.end(), 0);
        for (std::size_t i = perm.size(); i > 1; --i)
            std::swap(perm[i - 1], perm[rng.next_below(i)]);
        const Stats c = stats(permute_outputs(src, perm));
        CHECK(c.h == doctest::Approx(a.h).epsilon(1e-12));
        CHECK(c.z == doctest::Approx(a.z).epsilon(1e-12));
        CHECK(c.pe == doctest::Approx(a.pe).epsilon(1e-12));
        CHECK(c.t == doctest::Approx(a.t).epsilon(1e-12));
    }
}

TEST_CASE("source files round-trip") {
    Prng rng(21);
    auto f4 = Field::make(2, 2);
    const Source src = random_source(f4, 3, rng);
    std::stringstream buf;
    write_source(buf, src);
    const Source back = read_source(buf);
    CHECK(back.output_size() == src.output_size());
    for (unsigned x = 0; x < 4; ++x)
        for (std::size_t y = 0; y < 3; ++y)
            CHECK(back.joint(Elem(x), y) == doctest::Approx(src.joint(Elem(x), y)).epsilon(1e-15));
}
