#include "polarff/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>

namespace polarff {

SourceSampler::SourceSampler(Source src) : src_(std::move(src)) {
    if (!src_.uniform_input())
        raise(Errc::non_uniform_input, "Monte-Carlo sampling needs a uniform-input channel");
    symmetric_ = is_symmetric(src_);
    const unsigned q = src_.field().q();
    const std::size_t osz = src_.output_size();
    cdf_.resize(std::size_t(q) * osz);
    for (unsigned x = 0; x < q; ++x) {
        double acc = 0;
        for (std::size_t y = 0; y < osz; ++y) {
            acc += src_.joint(Elem(x), y) * q; // P(y|x)
            cdf_[std::size_t(x) * osz + y] = acc;
        }
        cdf_[std::size_t(x) * osz + osz - 1] = 1.0;
    }
}

void SourceSampler::sample(Elem x, Prng& rng, Posterior& likelihood_out) const {
    const unsigned q = src_.field().q();
    const std::size_t osz = src_.output_size();
    const double u = rng.next_double();
    const auto begin = cdf_.begin() + std::ptrdiff_t(std::size_t(x) * osz);
    const std::size_t y = std::size_t(std::upper_bound(begin, begin + osz, u) - begin);
    likelihood_out.resize(q);
    for (unsigned xp = 0; xp < q; ++xp) likelihood_out[xp] = src_.joint(Elem(xp), y) * q;
}

namespace {

struct Accum {
    std::vector<double> sum, sum_sq;
    std::size_t n = 0;
    void init(std::size_t dims) {
        sum.assign(dims, 0.0);
        sum_sq.assign(dims, 0.0);
        n = 0;
    }
    void add(std::span<const double> v) {
        for (std::size_t i = 0; i < v.size(); ++i) {
            sum[i] += v[i];
            sum_sq[i] += v[i] * v[i];
        }
        ++n;
    }
    void merge(const Accum& other) {
        for (std::size_t i = 0; i < sum.size(); ++i) {
            sum[i] += other.sum[i];
            sum_sq[i] += other.sum_sq[i];
        }
        n += other.n;
    }
    McEstimate estimate(std::size_t i) const {
        const double mean = sum[i] / double(n);
        double var = sum_sq[i] / double(n) - mean * mean;
        if (var < 0) var = 0;
        return {mean, n > 1 ? std::sqrt(var / double(n)) : 0.0};
    }
};

// Per-sample integrands at one index: entropy, z_1..z_{q-1}, pe, mean z.
void posterior_integrands(const Field& f, const Posterior& post, std::vector<double>& out) {
    const unsigned q = f.q();
    const double logq = std::log(double(q));
    out.assign(q + 2, 0.0);
    double h = 0, best = 0;
    for (unsigned x = 0; x < q; ++x) {
        if (post[x] > 0) h -= post[x] * std::log(post[x]);
        best = std::max(best, post[x]);
    }
    out[0] = h / logq;
    double zsum = 0;
    for (unsigned d = 1; d < q; ++d) {
        double zd = 0;
        for (unsigned x = 0; x < q; ++x) zd += std::sqrt(post[x] * post[f.add(Elem(x), Elem(d))]);
        out[d] = zd;
        zsum += zd;
    }
    out[q] = 1.0 - best;
    out[q + 1] = zsum / (q - 1);
}

McStats finalize(const Field& f, const Accum& acc) {
    const unsigned q = f.q();
    McStats st;
    st.n_samples = acc.n;
    st.h = acc.estimate(0);
    st.z_d.resize(q - 1);
    for (unsigned d = 1; d < q; ++d) st.z_d[d - 1] = acc.estimate(d);
    st.pe = acc.estimate(q);
    st.z = acc.estimate(q + 1);
    return st;
}

struct Job {
    const UseSampler* sampler;
    const ScEngine* engine;
    std::uint64_t seed;
    bool all_zero;
    std::size_t target; // SIZE_MAX records every index into its own slot
};

// One Monte-Carlo sample: draw u, encode, transmit, then walk the decoder
// with the true symbols, collecting the posterior where requested.
void run_sample(const Job& job, std::size_t sample_idx, std::vector<Posterior>& lk,
                std::vector<Accum>& accs, std::vector<double>& scratch) {
    const Field& f = job.sampler->field();
    Prng rng(job.seed, sample_idx);
    const std::size_t n = job.engine->block_length();

    std::vector<Elem> u(n, 0), x(n, 0);
    if (!job.all_zero) {
        for (std::size_t j = 0; j < n; ++j) u[j] = Elem(rng.next_below(f.q()));
        x = job.engine->encode(u);
    }

    lk.resize(n);
    for (std::size_t j = 0; j < n; ++j) job.sampler->sample(x[j], rng, lk[j]);

    const std::size_t last = job.target == SIZE_MAX ? n - 1 : job.target;
    job.engine->run(
        lk,
        [&](std::size_t i, const Posterior& post) {
            if (job.target == SIZE_MAX) {
                posterior_integrands(f, post, scratch);
                accs[i].add(scratch);
            } else if (i == job.target) {
                posterior_integrands(f, post, scratch);
                accs[0].add(scratch);
            }
            return u[i];
        },
        last);
}

std::vector<Accum> run_jobs(const Job& job, std::size_t n_samples, std::size_t n_acc,
                            unsigned n_threads) {
    const unsigned q = job.sampler->field().q();
    if (n_samples < 1) raise(Errc::bad_sample_count, "need at least one sample");
    if (n_threads == 0) n_threads = std::max(1u, std::thread::hardware_concurrency());

    constexpr std::size_t kChunk = 1024;
    const std::size_t n_chunks = (n_samples + kChunk - 1) / kChunk;
    std::vector<std::vector<Accum>> chunk_accs(n_chunks);

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        try {
            std::vector<Posterior> lk;
            std::vector<double> scratch;
            while (true) {
                const std::size_t c = next.fetch_add(1);
                if (c >= n_chunks) break;
                auto& accs = chunk_accs[c];
                accs.resize(n_acc);
                for (auto& a : accs) a.init(q + 2);
                const std::size_t begin = c * kChunk;
                const std::size_t end = std::min(begin + kChunk, n_samples);
                for (std::size_t s = begin; s < end; ++s) run_sample(job, s, lk, accs, scratch);
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(failure_mutex);
            if (!failure) failure = std::current_exception();
        }
    };
    if (n_threads == 1 || n_chunks == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < std::min<std::size_t>(n_threads, n_chunks); ++t)
            pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (failure) std::rethrow_exception(failure);

    // chunk order is fixed, so the merged sums do not depend on scheduling
    std::vector<Accum> total(n_acc);
    for (auto& a : total) a.init(q + 2);
    for (const auto& accs : chunk_accs)
        for (std::size_t i = 0; i < n_acc; ++i) total[i].merge(accs[i]);
    return total;
}

} // namespace

McStats mc_subchannel_stats(const UseSampler& sampler, const Matrix& kernel,
                            std::span<const unsigned> path, std::size_t n_samples,
                            std::uint64_t seed, unsigned n_threads) {
    if (!sampler.field().same_as(kernel.field())) raise(Errc::bad_parameter, "field mismatch");
    const ScEngine engine(kernel, unsigned(path.size()));
    Job job{&sampler, &engine, seed, sampler.symmetric(), engine.digits_index(path)};
    const auto accs = run_jobs(job, n_samples, 1, n_threads);
    return finalize(sampler.field(), accs[0]);
}

std::vector<McStats> mc_all_subchannels(const UseSampler& sampler, const Matrix& kernel,
                                        unsigned depth, std::size_t n_samples, std::uint64_t seed,
                                        unsigned n_threads) {
    if (!sampler.field().same_as(kernel.field())) raise(Errc::bad_parameter, "field mismatch");
    const ScEngine engine(kernel, depth);
    Job job{&sampler, &engine, seed, sampler.symmetric(), SIZE_MAX};
    const auto accs = run_jobs(job, n_samples, engine.block_length(), n_threads);
    std::vector<McStats> out;
    out.reserve(accs.size());
    for (const auto& a : accs) out.push_back(finalize(sampler.field(), a));
    return out;
}

} // namespace polarff
