#include "polarff/source.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace polarff {

namespace {
constexpr double kNormTol = 1e-12;
}

Source::Source(FieldPtr field, std::size_t output_size, std::vector<double> joint, Validate mode)
    : field_(std::move(field)), output_size_(output_size), joint_(std::move(joint)) {
    const unsigned q = field_->q();
    if (output_size_ == 0) raise(Errc::bad_parameter, "empty output alphabet");
    if (joint_.size() != std::size_t(q) * output_size_)
        raise(Errc::length_mismatch, "joint table does not match q x output_size");

    double total = 0;
    for (double v : joint_) {
        if (v < 0) {
            if (mode == Validate::strict) raise(Errc::negative_probability, "negative joint entry");
            if (v < -kNormTol) raise(Errc::negative_probability, "negative joint entry");
            v = 0;
        }
        total += v;
    }
    if (mode == Validate::strict) {
        if (std::abs(total - 1.0) > kNormTol) raise(Errc::not_normalized, "joint mass is not 1");
    } else {
        if (total <= 0) raise(Errc::not_normalized, "joint mass is zero");
        if (std::abs(total - 1.0) > kNormTol)
            for (double& v : joint_) v /= total;
        for (double& v : joint_)
            if (v < 0) v = 0;
    }

    uniform_input_ = true;
    for (unsigned x = 0; x < q && uniform_input_; ++x) {
        double row = 0;
        for (std::size_t y = 0; y < output_size_; ++y) row += joint_[std::size_t(x) * output_size_ + y];
        uniform_input_ = std::abs(row - 1.0 / q) <= kNormTol;
    }
}

double Source::output_mass(std::size_t y) const {
    double s = 0;
    for (unsigned x = 0; x < field_->q(); ++x) s += joint(Elem(x), y);
    return s;
}

std::vector<double> Source::posterior(std::size_t y) const {
    const unsigned q = field_->q();
    std::vector<double> post(q);
    const double mass = output_mass(y);
    if (mass <= 0) {
        std::fill(post.begin(), post.end(), 1.0 / q);
        return post;
    }
    for (unsigned x = 0; x < q; ++x) post[x] = joint(Elem(x), y) / mass;
    return post;
}

std::vector<double> Source::input_marginal() const {
    const unsigned q = field_->q();
    std::vector<double> px(q, 0.0);
    for (unsigned x = 0; x < q; ++x)
        for (std::size_t y = 0; y < output_size_; ++y) px[x] += joint(Elem(x), y);
    return px;
}

Source source_from_joint(FieldPtr field, std::size_t output_size, std::vector<double> joint) {
    return Source(std::move(field), output_size, std::move(joint), Source::Validate::strict);
}

Source qsc(FieldPtr field, double eps) {
    const unsigned q = field->q();
    if (eps < 0 || eps > double(q - 1) / q) raise(Errc::bad_parameter, "qsc flip probability out of range");
    std::vector<double> joint(std::size_t(q) * q, 0.0);
    for (unsigned x = 0; x < q; ++x)
        for (unsigned y = 0; y < q; ++y)
            joint[std::size_t(x) * q + y] = (x == y ? 1.0 - eps : eps / (q - 1)) / q;
    return Source(std::move(field), q, std::move(joint), Source::Validate::renormalize);
}

Source erasure(FieldPtr field, double eps) {
    const unsigned q = field->q();
    if (eps < 0 || eps > 1) raise(Errc::bad_parameter, "erasure probability out of range");
    std::vector<double> joint(std::size_t(q) * (q + 1), 0.0);
    for (unsigned x = 0; x < q; ++x) {
        joint[std::size_t(x) * (q + 1) + x] = (1.0 - eps) / q;
        joint[std::size_t(x) * (q + 1) + q] = eps / q;
    }
    Source src(std::move(field), q + 1, std::move(joint), Source::Validate::renormalize);
    src.output_labels.resize(q + 1);
    for (unsigned y = 0; y < q; ++y) src.output_labels[y] = std::to_string(y);
    src.output_labels[q] = "e";
    return src;
}

namespace {

void enumerate_subsets(unsigned q, unsigned k, std::vector<std::vector<unsigned>>& out) {
    std::vector<unsigned> cur(k);
    std::iota(cur.begin(), cur.end(), 0);
    while (true) {
        out.push_back(cur);
        int i = int(k) - 1;
        while (i >= 0 && cur[i] == q - k + i) --i;
        if (i < 0) break;
        ++cur[i];
        for (unsigned j = i + 1; j < k; ++j) cur[j] = cur[j - 1] + 1;
    }
}

double binom(unsigned n, unsigned r) {
    double v = 1;
    for (unsigned i = 0; i < r; ++i) v = v * (n - i) / (i + 1);
    return v;
}

} // namespace

Source subset_channel(FieldPtr field, unsigned k, double eps) {
    const unsigned q = field->q();
    if (k < 1 || k > q - 1) raise(Errc::bad_parameter, "subset size out of range");
    if (eps < 0 || eps > 1) raise(Errc::bad_parameter, "mixing probability out of range");

    std::vector<std::vector<unsigned>> subsets;
    enumerate_subsets(q, k, subsets);
    const std::size_t n_small = subsets.size();
    enumerate_subsets(q, k + 1, subsets);

    const double w_small = (1.0 - eps) / binom(q - 1, k - 1) / q;
    const double w_large = eps / binom(q - 1, k) / q;

    std::vector<double> joint(std::size_t(q) * subsets.size(), 0.0);
    for (std::size_t y = 0; y < subsets.size(); ++y)
        for (unsigned x : subsets[y])
            joint[std::size_t(x) * subsets.size() + y] = y < n_small ? w_small : w_large;

    Source src(std::move(field), subsets.size(), std::move(joint), Source::Validate::renormalize);
    src.output_labels.reserve(subsets.size());
    for (const auto& s : subsets) {
        std::string label = "{";
        for (std::size_t i = 0; i < s.size(); ++i) label += (i ? "," : "") + std::to_string(s[i]);
        src.output_labels.push_back(label + "}");
    }
    return src;
}

Source symmetrize(const Source& src) {
    const Field& f = src.field();
    const unsigned q = f.q();
    const std::size_t osz = src.output_size();
    std::vector<double> joint(std::size_t(q) * q * osz, 0.0);
    // P(x, (s, z)) = P_NZ(s - x, z) / q
    for (unsigned x = 0; x < q; ++x)
        for (unsigned s = 0; s < q; ++s) {
            const Elem n = f.sub(Elem(s), Elem(x));
            for (std::size_t z = 0; z < osz; ++z)
                joint[(std::size_t(x) * q + s) * osz + z] = src.joint(n, z) / q;
        }
    return Source(src.field_ptr(), std::size_t(q) * osz, std::move(joint),
                  Source::Validate::renormalize);
}

namespace {

// Columns of the likelihood matrix, sorted to make multiset comparison cheap.
std::vector<std::vector<double>> sorted_likelihood_columns(const Source& src, Elem shift) {
    const Field& f = src.field();
    const unsigned q = f.q();
    std::vector<std::vector<double>> cols(src.output_size(), std::vector<double>(q));
    for (std::size_t y = 0; y < src.output_size(); ++y)
        for (unsigned x = 0; x < q; ++x)
            cols[y][x] = src.joint(f.add(Elem(x), shift), y) * q;
    std::sort(cols.begin(), cols.end());
    return cols;
}

} // namespace

bool is_symmetric(const Source& src, double tol) {
    if (!src.uniform_input())
        raise(Errc::non_uniform_input, "symmetry is defined for uniform-input channels");
    const auto base = sorted_likelihood_columns(src, 0);
    for (unsigned d = 1; d < src.field().q(); ++d) {
        const auto shifted = sorted_likelihood_columns(src, Elem(d));
        for (std::size_t y = 0; y < base.size(); ++y)
            for (std::size_t x = 0; x < base[y].size(); ++x)
                if (std::abs(base[y][x] - shifted[y][x]) > tol) return false;
    }
    return true;
}

Source relabel(const Source& src, Elem r, Elem d) {
    const Field& f = src.field();
    if (r == 0) raise(Errc::bad_parameter, "relabel requires a nonzero multiplier");
    const unsigned q = f.q();
    const std::size_t osz = src.output_size();
    std::vector<double> joint(std::size_t(q) * osz);
    const Elem rinv = f.inv(r);
    for (unsigned x = 0; x < q; ++x) {
        const Elem old_x = f.mul(rinv, f.sub(Elem(x), d));
        for (std::size_t y = 0; y < osz; ++y)
            joint[std::size_t(x) * osz + y] = src.joint(old_x, y);
    }
    Source out(src.field_ptr(), osz, std::move(joint), Source::Validate::renormalize);
    out.output_labels = src.output_labels;
    return out;
}

Source permute_outputs(const Source& src, std::span<const std::size_t> perm) {
    if (perm.size() != src.output_size()) raise(Errc::length_mismatch, "permutation size mismatch");
    const unsigned q = src.field().q();
    const std::size_t osz = src.output_size();
    std::vector<double> joint(std::size_t(q) * osz);
    for (unsigned x = 0; x < q; ++x)
        for (std::size_t y = 0; y < osz; ++y)
            joint[std::size_t(x) * osz + perm[y]] = src.joint(Elem(x), y);
    return Source(src.field_ptr(), osz, std::move(joint), Source::Validate::renormalize);
}

} // namespace polarff
