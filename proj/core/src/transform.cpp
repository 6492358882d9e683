#include "polarff/transform.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "polarff/montecarlo.hpp"
#include "polarff/rng.hpp"
#include "polarff/stats.hpp"

namespace polarff {

namespace {

void check_kernel(const Source& src, const Matrix& g) {
    if (!src.field().same_as(g.field())) raise(Errc::bad_parameter, "kernel field mismatch");
    if (g.rows() != g.cols()) raise(Errc::bad_parameter, "kernel must be square");
    if (!is_invertible(g)) raise(Errc::singular, "kernel must be invertible");
}

std::size_t ipow(std::size_t b, unsigned e) {
    std::size_t r = 1;
    while (e--) r *= b;
    return r;
}

} // namespace

Source merge_equivalent_outputs(const Source& src, double tol) {
    const unsigned q = src.field().q();
    const std::size_t osz = src.output_size();

    struct Column {
        std::vector<double> posterior;
        std::size_t y;
    };
    std::vector<Column> cols;
    cols.reserve(osz);
    for (std::size_t y = 0; y < osz; ++y) {
        const double mass = src.output_mass(y);
        if (mass <= 0) continue; // zero-mass outputs carry nothing
        std::vector<double> post(q);
        for (unsigned x = 0; x < q; ++x) post[x] = src.joint(Elem(x), y) / mass;
        cols.push_back({std::move(post), y});
    }
    std::sort(cols.begin(), cols.end(),
              [](const Column& a, const Column& b) { return a.posterior < b.posterior; });

    auto close = [&](const std::vector<double>& a, const std::vector<double>& b) {
        for (unsigned x = 0; x < q; ++x)
            if (std::abs(a[x] - b[x]) > tol) return false;
        return true;
    };

    std::vector<std::vector<std::size_t>> groups;
    const std::vector<double>* rep = nullptr;
    for (const Column& c : cols) {
        if (rep && close(*rep, c.posterior)) {
            groups.back().push_back(c.y);
        } else {
            groups.push_back({c.y});
            rep = &c.posterior;
        }
    }

    std::vector<double> joint(std::size_t(q) * groups.size(), 0.0);
    for (std::size_t gi = 0; gi < groups.size(); ++gi)
        for (std::size_t y : groups[gi])
            for (unsigned x = 0; x < q; ++x)
                joint[std::size_t(x) * groups.size() + gi] += src.joint(Elem(x), y);

    return Source(src.field_ptr(), groups.size(), std::move(joint), Source::Validate::renormalize);
}

namespace {

std::vector<Source> transform_impl(const Source& src, const Matrix& g,
                                   const TransformOptions& opts, int only_branch) {
    check_kernel(src, g);
    const Field& f = src.field();
    const unsigned q = f.q();
    const std::size_t l = g.rows();
    const std::size_t osz = src.output_size();
    const std::size_t y_cells = ipow(osz, unsigned(l));

    const unsigned lo = only_branch < 0 ? 0 : unsigned(only_branch);
    const unsigned hi = only_branch < 0 ? unsigned(l) : unsigned(only_branch) + 1;
    for (unsigned i = lo; i < hi; ++i)
        if (double(y_cells) * ipow(q, i) * q > double(opts.max_cells))
            raise(Errc::budget_exceeded, "transform output table exceeds the cell budget");

    std::vector<std::vector<double>> tables(l);
    for (unsigned i = lo; i < hi; ++i) tables[i].assign(ipow(q, i) * y_cells * q, 0.0);

    // One sweep over (u, y); each subchannel accumulates at
    // (u_i ; big-endian u-prefix then big-endian y digits).
    std::vector<Elem> u(l, 0), x(l, 0);
    std::vector<std::size_t> ydig(l, 0);
    const std::size_t u_count = ipow(q, unsigned(l));
    for (std::size_t uidx = 0; uidx < u_count; ++uidx) {
        {
            std::size_t v = uidx;
            for (std::size_t j = l; j-- > 0;) { // big-endian: u[0] is the most significant digit
                u[j] = Elem(v % q);
                v /= q;
            }
        }
        for (std::size_t j = 0; j < l; ++j) {
            Elem acc = 0;
            for (std::size_t r = 0; r < l; ++r) acc = f.add(acc, f.mul(u[r], g.at(r, j)));
            x[j] = acc;
        }
        std::vector<std::size_t> prefix_id(l + 1, 0);
        for (std::size_t j = 0; j < l; ++j) prefix_id[j + 1] = prefix_id[j] * q + u[j];

        std::fill(ydig.begin(), ydig.end(), 0);
        std::size_t ynum = 0;
        while (true) {
            double w = 1;
            for (std::size_t j = 0; j < l; ++j) {
                w *= src.joint(x[j], ydig[j]);
                if (w == 0) break;
            }
            if (w != 0)
                for (unsigned i = lo; i < hi; ++i) {
                    const std::size_t out_id = prefix_id[i] * y_cells + ynum;
                    tables[i][std::size_t(u[i]) * (ipow(q, i) * y_cells) + out_id] += w;
                }
            // big-endian odometer over y digits
            std::size_t pos = l;
            while (pos-- > 0) {
                if (++ydig[pos] < osz) break;
                ydig[pos] = 0;
                if (pos == 0) { pos = SIZE_MAX; break; }
            }
            if (pos == SIZE_MAX) break;
            ynum = 0;
            for (std::size_t j = 0; j < l; ++j) ynum = ynum * osz + ydig[j];
        }
    }

    std::vector<Source> out;
    for (unsigned i = lo; i < hi; ++i) {
        Source sub(src.field_ptr(), ipow(q, i) * y_cells, std::move(tables[i]),
                   Source::Validate::renormalize);
        out.push_back(opts.merge ? merge_equivalent_outputs(sub, opts.merge_tol) : std::move(sub));
    }
    return out;
}

} // namespace

std::vector<Source> basic_transform(const Source& src, const Matrix& g,
                                    const TransformOptions& opts) {
    return transform_impl(src, g, opts, -1);
}

Source transform_subchannel(const Source& src, const Matrix& g, unsigned branch,
                            const TransformOptions& opts) {
    if (branch >= g.rows()) raise(Errc::bad_parameter, "branch out of range");
    return std::move(transform_impl(src, g, opts, int(branch)).front());
}

Source transform_path(const Source& src, const Matrix& g, std::span<const unsigned> path,
                      const TransformOptions& opts) {
    Source cur = opts.merge ? merge_equivalent_outputs(src, opts.merge_tol) : src;
    for (unsigned b : path) cur = transform_subchannel(cur, g, b, opts);
    return cur;
}

Posterior kernel_posterior(const Matrix& g, const std::vector<Posterior>& priors,
                           std::span<const Elem> prefix, unsigned i) {
    const Field& f = g.field();
    const unsigned q = f.q();
    const std::size_t l = g.rows();
    if (priors.size() != l) raise(Errc::length_mismatch, "need one prior per kernel column");
    if (prefix.size() != i || i >= l) raise(Errc::bad_parameter, "prefix length must equal the index");

    // x = u G accumulated incrementally: base part from the prefix, then the
    // candidate digit, then an odometer over the suffix with row updates.
    std::vector<Elem> base(l, 0);
    for (std::size_t j = 0; j < l; ++j) {
        Elem acc = 0;
        for (std::size_t r = 0; r < prefix.size(); ++r) acc = f.add(acc, f.mul(prefix[r], g.at(r, j)));
        base[j] = acc;
    }

    Posterior post(q, 0.0);
    const std::size_t n_suffix = l - 1 - i;
    std::vector<Elem> x(l);
    std::vector<unsigned> digits(n_suffix, 0);
    for (unsigned v = 0; v < q; ++v) {
        for (std::size_t j = 0; j < l; ++j) x[j] = f.add(base[j], f.mul(Elem(v), g.at(i, j)));
        double total = 0;
        std::fill(digits.begin(), digits.end(), 0);
        while (true) {
            double w = 1;
            for (std::size_t j = 0; j < l && w != 0; ++j) w *= priors[j][x[j]];
            total += w;
            std::size_t pos = 0;
            while (pos < n_suffix) {
                digits[pos]++;
                for (std::size_t j = 0; j < l; ++j)
                    x[j] = f.add(x[j], g.at(i + 1 + pos, j)); // one more copy of that row
                if (digits[pos] < q) break;
                digits[pos] = 0; // q copies cancel
                ++pos;
            }
            if (pos == n_suffix) break;
        }
        post[v] = total;
    }

    double norm = 0;
    for (double w : post) norm += w;
    if (norm <= 0) raise(Errc::zero_likelihood, "no candidate is consistent with the conditioning");
    for (double& w : post) w /= norm;
    return post;
}

MartingaleTrace martingale_trace(const Source& src, const Matrix& g, unsigned depth,
                                 std::size_t n_paths, std::uint64_t seed,
                                 const MartingaleOptions& opts) {
    check_kernel(src, g);
    const std::size_t l = g.rows();
    MartingaleTrace trace;
    trace.exact = true;
    trace.h.resize(n_paths);

    std::vector<std::vector<unsigned>> paths(n_paths, std::vector<unsigned>(depth));
    for (std::size_t pi = 0; pi < n_paths; ++pi) {
        Prng rng(seed, pi);
        for (unsigned k = 0; k < depth; ++k) paths[pi][k] = unsigned(rng.next_below(l));
    }

    for (std::size_t pi = 0; pi < n_paths; ++pi) {
        try {
            trace.h[pi] = stats(transform_path(src, g, paths[pi], opts.transform)).h;
        } catch (const Error& e) {
            if (e.code() != Errc::budget_exceeded) throw;
            trace.exact = false;
            SourceSampler sampler(src);
            const auto est = mc_subchannel_stats(sampler, g, paths[pi], opts.mc_samples,
                                                 seed ^ 0x5bd1e995u ^ pi, opts.n_threads);
            trace.h[pi] = est.h.value;
        }
    }
    return trace;
}

} // namespace polarff
