#include "polarff/sc.hpp"

namespace polarff {

ScEngine::ScEngine(const Matrix& kernel, unsigned depth)
    : kernel_(kernel), depth_(depth), l_(kernel.rows()) {
    if (kernel.rows() != kernel.cols()) raise(Errc::bad_parameter, "kernel must be square");
    if (!is_invertible(kernel)) raise(Errc::singular, "kernel must be invertible");
    n_ = 1;
    for (unsigned k = 0; k < depth; ++k) n_ *= l_;
}

std::vector<unsigned> ScEngine::index_digits(std::size_t i) const {
    std::vector<unsigned> digits(depth_);
    for (unsigned k = depth_; k-- > 0;) {
        digits[k] = unsigned(i % l_);
        i /= l_;
    }
    return digits;
}

std::size_t ScEngine::digits_index(std::span<const unsigned> digits) const {
    std::size_t i = 0;
    for (unsigned d : digits) {
        if (d >= l_) raise(Errc::bad_parameter, "path digit out of range");
        i = i * l_ + d;
    }
    return i;
}

std::vector<Elem> ScEngine::run(const std::vector<Posterior>& use_likelihoods,
                                const std::function<Elem(std::size_t, const Posterior&)>& decide,
                                std::size_t last_index) const {
    if (use_likelihoods.size() != n_) raise(Errc::length_mismatch, "need one likelihood vector per use");
    // lk_stack[level] holds the derived likelihood vectors at that level;
    // preallocating keeps repeated runs allocation-free after warmup.
    std::vector<std::vector<Posterior>> lk_stack(depth_ + 1);
    std::size_t sz = 1;
    for (unsigned level = depth_ + 1; level-- > 0;) {
        lk_stack[level].assign(sz, Posterior(kernel_.field().q(), 0.0));
        sz *= l_;
    }
    lk_stack[0] = use_likelihoods;
    std::vector<Elem> x(n_, 0);
    rec(depth_, 0, lk_stack, decide, last_index, x);
    return x;
}

// Level counts the remaining depth; lk_stack[depth_ - level] is this call's
// input block of l^level vectors, and x_out is its output view.
void ScEngine::rec(unsigned level, std::size_t index_base,
                   std::vector<std::vector<Posterior>>& lk_stack,
                   const std::function<Elem(std::size_t, const Posterior&)>& decide,
                   std::size_t last_index, std::vector<Elem>& x_out) const {
    const Field& f = kernel_.field();
    auto& input = lk_stack[depth_ - level];

    if (level == 0) {
        Posterior post = input[0];
        double norm = 0;
        for (double w : post) norm += w;
        if (norm <= 0) raise(Errc::zero_likelihood, "use likelihood has no mass");
        for (double& w : post) w /= norm;
        x_out[0] = decide(index_base, post);
        return;
    }

    const std::size_t sub = lk_stack[depth_ - level + 1].size(); // l^(level-1) blocks
    std::vector<std::vector<Elem>> decided(l_, std::vector<Elem>(sub));
    std::vector<Elem> prefix;
    std::vector<Posterior> priors(l_);

    std::vector<Elem> sub_x(sub);
    for (unsigned b = 0; b < l_; ++b) {
        const std::size_t sub_base = index_base + b * sub;
        if (sub_base > last_index) break; // everything further is past the target

        auto& derived = lk_stack[depth_ - level + 1];
        for (std::size_t t = 0; t < sub; ++t) {
            prefix.clear();
            for (unsigned r = 0; r < b; ++r) prefix.push_back(decided[r][t]);
            for (unsigned j = 0; j < l_; ++j) priors[j] = input[t * l_ + j];
            derived[t] = kernel_posterior(kernel_, priors, prefix, b);
        }
        std::fill(sub_x.begin(), sub_x.end(), Elem(0));
        rec(level - 1, sub_base, lk_stack, decide, last_index, sub_x);
        decided[b] = sub_x;
    }

    for (std::size_t t = 0; t < sub; ++t)
        for (unsigned s = 0; s < l_; ++s) {
            Elem acc = 0;
            for (unsigned r = 0; r < l_; ++r) acc = f.add(acc, f.mul(decided[r][t], kernel_.at(r, s)));
            x_out[t * l_ + s] = acc;
        }
}

std::vector<Elem> ScEngine::encode(std::span<const Elem> u) const {
    if (u.size() != n_) raise(Errc::length_mismatch, "message length must be l^n");
    const Field& f = kernel_.field();

    // Mirror of the decoder recursion: subtree b holds the contiguous index
    // range [b * l^(level-1), (b+1) * l^(level-1)); its encoded values feed
    // row b of the kernel applied across blocks.
    struct Enc {
        const ScEngine& e;
        const Field& f;
        std::vector<Elem> operator()(unsigned level, std::span<const Elem> uu) const {
            if (level == 0) return {uu.begin(), uu.end()};
            const std::size_t sub = uu.size() / e.l_;
            std::vector<std::vector<Elem>> dec(e.l_);
            for (unsigned b = 0; b < e.l_; ++b)
                dec[b] = (*this)(level - 1, uu.subspan(b * sub, sub));
            std::vector<Elem> x(uu.size());
            for (std::size_t t = 0; t < sub; ++t)
                for (unsigned s = 0; s < e.l_; ++s) {
                    Elem acc = 0;
                    for (unsigned r = 0; r < e.l_; ++r)
                        acc = f.add(acc, f.mul(dec[r][t], e.kernel_.at(r, s)));
                    x[t * e.l_ + s] = acc;
                }
            return x;
        }
    };
    return Enc{*this, f}(depth_, u);
}

} // namespace polarff
