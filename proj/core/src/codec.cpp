#include "polarff/codec.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace polarff {

std::size_t CodeSpec::block_length() const {
    std::size_t n = 1;
    for (unsigned k = 0; k < depth; ++k) n *= kernel.rows();
    return n;
}

std::vector<std::size_t> CodeSpec::info_set() const {
    const std::size_t n = block_length();
    std::vector<bool> frozen(n, false);
    for (std::size_t i : frozen_set) frozen[i] = true;
    std::vector<std::size_t> info;
    info.reserve(n - frozen_set.size());
    for (std::size_t i = 0; i < n; ++i)
        if (!frozen[i]) info.push_back(i);
    return info;
}

CodeSpec build_spec(FieldPtr field, const Matrix& kernel, unsigned depth,
                    std::span<const IndexStats> per_index, const SelectionRule& rule) {
    if (!field->same_as(kernel.field())) raise(Errc::bad_parameter, "field mismatch");
    CodeSpec spec{std::move(field), kernel, depth, {}, {}};
    const std::size_t n = spec.block_length();
    if (per_index.size() != n) raise(Errc::length_mismatch, "need stats for every index");

    std::vector<bool> info(n, false);
    if (const auto* thr = std::get_if<ThresholdRule>(&rule)) {
        for (std::size_t i = 0; i < n; ++i) info[i] = per_index[i].h < thr->epsilon;
    } else {
        const double rate = std::get<TargetRateRule>(rule).rate;
        const double kd = rate * double(n);
        const auto k = std::llround(kd);
        if (rate < 0 || rate > 1 || std::abs(kd - double(k)) > 1e-9)
            raise(Errc::rate_infeasible, "target rate does not give an integer dimension");
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return per_index[a].pe < per_index[b].pe; // stable: ties stay index-ordered
        });
        for (std::size_t j = 0; j < std::size_t(k); ++j) info[order[j]] = true;
    }

    for (std::size_t i = 0; i < n; ++i)
        if (!info[i]) spec.frozen_set.push_back(i);
    spec.frozen_values.assign(spec.frozen_set.size(), 0);
    return spec;
}

std::vector<std::size_t> rm_indices(unsigned q, unsigned depth, long n0) {
    if (n0 < 0 || n0 > long(depth) * (q - 1)) raise(Errc::bad_threshold, "rm threshold out of range");
    std::size_t n = 1;
    for (unsigned k = 0; k < depth; ++k) n *= q;
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < n; ++i) {
        long sum = 0;
        std::size_t v = i;
        while (v) {
            sum += long(v % q);
            v /= q;
        }
        if (sum > n0) out.push_back(i);
    }
    return out;
}

std::vector<std::size_t> hyperbolic_indices(unsigned q, unsigned depth, long long n0) {
    std::size_t n = 1;
    for (unsigned k = 0; k < depth; ++k) n *= q;
    if (n0 < 1 || n0 > (long long)n) raise(Errc::bad_threshold, "hyperbolic threshold out of range");
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < n; ++i) {
        long long prod = 1;
        std::size_t v = i;
        for (unsigned k = 0; k < depth; ++k) {
            prod *= (long long)(v % q) + 1;
            v /= q;
        }
        if (prod > n0) out.push_back(i);
    }
    return out;
}

std::vector<Elem> encode(const CodeSpec& spec, std::span<const Elem> info_symbols) {
    const std::size_t n = spec.block_length();
    if (info_symbols.size() != n - spec.frozen_set.size())
        raise(Errc::length_mismatch, "information symbol count mismatch");

    std::vector<Elem> u(n, 0);
    std::size_t fi = 0, mi = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (fi < spec.frozen_set.size() && spec.frozen_set[fi] == i)
            u[i] = spec.frozen_values[fi++];
        else
            u[i] = info_symbols[mi++];
    }
    return ScEngine(spec.kernel, spec.depth).encode(u);
}

ScResult sc_decode(const CodeSpec& spec, const std::vector<Posterior>& likelihoods) {
    const std::size_t n = spec.block_length();
    std::vector<Elem> frozen_value(n, 0);
    std::vector<bool> frozen(n, false);
    for (std::size_t j = 0; j < spec.frozen_set.size(); ++j) {
        frozen[spec.frozen_set[j]] = true;
        frozen_value[spec.frozen_set[j]] = spec.frozen_values[j];
    }

    ScResult result;
    result.u.assign(n, 0);
    result.info.reserve(n - spec.frozen_set.size());

    ScEngine engine(spec.kernel, spec.depth);
    engine.run(likelihoods, [&](std::size_t i, const Posterior& post) {
        Elem v;
        if (frozen[i]) {
            v = frozen_value[i];
        } else {
            std::size_t best = 0;
            for (std::size_t x = 1; x < post.size(); ++x)
                if (post[x] > post[best]) best = x; // ties keep the smaller encoding
            v = Elem(best);
            result.info.push_back(v);
        }
        result.u[i] = v;
        return v;
    });
    return result;
}

double union_bound(std::span<const double> per_index_pe, std::span<const std::size_t> info_set) {
    double sum = 0;
    for (std::size_t i : info_set) sum += per_index_pe[i];
    return sum;
}

unsigned min_distance_exhaustive(const CodeSpec& spec) {
    const auto info = spec.info_set();
    const Field& f = spec.kernel.field();
    const unsigned q = f.q();
    const std::size_t n = spec.block_length();
    for (Elem v : spec.frozen_values)
        if (v != 0) raise(Errc::bad_parameter, "weight enumeration needs zero frozen values");

    double count = std::pow(double(q), double(info.size()));
    if (count > double(1 << 20)) raise(Errc::budget_exceeded, "too many codewords to enumerate");

    ScEngine engine(spec.kernel, spec.depth);
    std::vector<Elem> msg(info.size(), 0);
    unsigned best = unsigned(n) + 1;
    while (true) {
        std::size_t pos = 0;
        while (pos < msg.size()) {
            if (++msg[pos] < q) break;
            msg[pos] = 0;
            ++pos;
        }
        if (pos == msg.size()) break;
        const auto x = encode(spec, msg);
        unsigned w = 0;
        for (Elem e : x) w += e != 0;
        best = std::min(best, w);
    }
    if (best > n) raise(Errc::bad_parameter, "minimum distance of a dimension-0 code");
    return best;
}

} // namespace polarff
