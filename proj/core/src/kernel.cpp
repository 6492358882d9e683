#include "polarff/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace polarff {

StandardForm standard_form(const Matrix& g) {
    std::vector<std::size_t> pref(g.cols());
    std::iota(pref.begin(), pref.end(), 0);
    return standard_form(g, pref);
}

StandardForm standard_form(const Matrix& g, std::span<const std::size_t> col_preference) {
    if (g.rows() != g.cols()) raise(Errc::bad_parameter, "standard form of a non-square matrix");
    const Field& f = g.field();
    const std::size_t l = g.rows();
    if (col_preference.size() != l) raise(Errc::length_mismatch, "preference size mismatch");

    Matrix work = g;
    Matrix v = identity(g.field_ptr(), l);
    std::vector<std::size_t> pivot(l, 0);
    std::vector<bool> used(l, false);

    // Bottom-up: row i may only be combined with rows below it, which keeps V
    // upper triangular.
    for (std::size_t ii = l; ii-- > 0;) {
        for (std::size_t j = l; j-- > ii + 1;) {
            const Elem factor = work.at(ii, pivot[j]);
            if (factor == 0) continue;
            for (std::size_t c = 0; c < l; ++c)
                work.at(ii, c) = f.sub(work.at(ii, c), f.mul(factor, work.at(j, c)));
            for (std::size_t c = 0; c < l; ++c)
                v.at(ii, c) = f.sub(v.at(ii, c), f.mul(factor, v.at(j, c)));
        }
        bool found = false;
        for (std::size_t cand : col_preference) {
            if (used[cand] || work.at(ii, cand) == 0) continue;
            pivot[ii] = cand;
            used[cand] = true;
            found = true;
            break;
        }
        if (!found) raise(Errc::singular, "matrix is singular");
        const Elem scale = f.inv(work.at(ii, pivot[ii]));
        if (scale != 1) {
            for (std::size_t c = 0; c < l; ++c) work.at(ii, c) = f.mul(scale, work.at(ii, c));
            for (std::size_t c = 0; c < l; ++c) v.at(ii, c) = f.mul(scale, v.at(ii, c));
        }
    }

    return StandardForm{apply_col_perm(work, pivot), std::move(v), std::move(pivot)};
}

namespace {

bool is_identity(const Matrix& m) {
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c)
            if (m.at(r, c) != (r == c ? 1 : 0)) return false;
    return true;
}

} // namespace

Classification classify_polarizing(const Matrix& g) {
    std::vector<std::size_t> pref(g.cols());
    std::iota(pref.begin(), pref.end(), 0);
    return classify_polarizing(g, pref);
}

Classification classify_polarizing(const Matrix& g, std::span<const std::size_t> col_preference) {
    const StandardForm sf = standard_form(g, col_preference);
    if (is_identity(sf.form)) return {PolarizationClass::non_polarizing_identity, 0};
    const auto generated = g.field().generated_subfield(sf.form.entries());
    if (generated.size() == g.field().q()) return {PolarizationClass::polarizing, 0};
    return {PolarizationClass::non_polarizing_subfield, unsigned(generated.size())};
}

namespace {

// Minimum Hamming distance from target to the span of the given vectors,
// enumerated with single-digit odometer updates.
unsigned coset_min_weight(const Field& f, std::span<const Elem> target,
                          const std::vector<std::vector<Elem>>& span_vectors) {
    const std::size_t l = target.size();
    const std::size_t k = span_vectors.size();
    std::vector<Elem> cur(target.begin(), target.end());
    auto weight = [&] {
        unsigned w = 0;
        for (Elem e : cur) w += e != 0;
        return w;
    };
    unsigned best = weight();
    if (k == 0) return best;
    std::vector<unsigned> digits(k, 0);
    while (true) {
        std::size_t pos = 0;
        while (pos < k) {
            digits[pos]++;
            // moving digit from d-1 to d adds one more copy of the vector
            for (std::size_t c = 0; c < l; ++c)
                cur[c] = f.add(cur[c], span_vectors[pos][c]);
            if (digits[pos] < f.q()) break;
            digits[pos] = 0; // wrapped: q additions cancel out
            ++pos;
        }
        if (pos == k) break;
        best = std::min(best, weight());
    }
    return best;
}

} // namespace

PartialDistances partial_distances(const Matrix& g) {
    if (g.rows() != g.cols()) raise(Errc::bad_parameter, "partial distances of a non-square matrix");
    const Field& f = g.field();
    const std::size_t l = g.rows();
    double budget = 1;
    for (std::size_t i = 0; i < l; ++i) budget *= f.q();
    if (budget > double(1 << 24)) raise(Errc::budget_exceeded, "q^l exceeds the enumeration budget");

    const Matrix h = mat_invert(g);

    PartialDistances pd;
    pd.dc.resize(l);
    pd.ds.resize(l);
    for (std::size_t i = 0; i < l; ++i) {
        std::vector<std::vector<Elem>> below;
        for (std::size_t j = i + 1; j < l; ++j)
            below.emplace_back(g.row(j).begin(), g.row(j).end());
        pd.dc[i] = coset_min_weight(f, g.row(i), below);

        std::vector<Elem> col(l);
        for (std::size_t r = 0; r < l; ++r) col[r] = h.at(r, i);
        std::vector<std::vector<Elem>> before;
        for (std::size_t j = 0; j < i; ++j) {
            std::vector<Elem> cj(l);
            for (std::size_t r = 0; r < l; ++r) cj[r] = h.at(r, j);
            before.push_back(std::move(cj));
        }
        pd.ds[i] = coset_min_weight(f, col, before);
    }
    return pd;
}

Exponents exponents(const PartialDistances& pd) {
    const std::size_t l = pd.dc.size();
    const double logl = std::log(double(l));
    double ec = 0, es = 0;
    for (std::size_t i = 0; i < l; ++i) {
        ec += std::log(double(pd.dc[i]));
        es += std::log(double(pd.ds[i]));
    }
    ec /= double(l) * logl;
    es /= double(l) * logl;
    double vc = 0;
    for (std::size_t i = 0; i < l; ++i) {
        const double d = std::log(double(pd.dc[i])) / logl - ec;
        vc += d * d;
    }
    vc /= double(l);
    return {ec, es, vc};
}

Exponents exponents(const Matrix& g) { return exponents(partial_distances(g)); }

KernelReport analyze_kernel(const Matrix& g) {
    KernelReport rep{standard_form(g), classify_polarizing(g), partial_distances(g), {0, 0, 0}};
    rep.ex = exponents(rep.pd);
    return rep;
}

Matrix rs_matrix(FieldPtr field) {
    const Field& f = *field;
    const unsigned q = f.q();
    Matrix g(field, q, q);
    for (unsigned i = 0; i + 1 < q; ++i)
        for (unsigned j = 0; j + 1 < q; ++j)
            g.at(i, j) = f.alpha_pow(std::int64_t(i) * j);
    for (unsigned j = 0; j < q; ++j) g.at(q - 1, j) = 1;
    return g;
}

Matrix rs_submatrix(FieldPtr field, std::size_t l) {
    const unsigned q = field->q();
    if (l > q) raise(Errc::size_exceeds_field, "submatrix size exceeds the field size");
    const Matrix full = rs_matrix(std::move(field));
    Matrix g(full.field_ptr(), l, l);
    for (std::size_t r = 0; r < l; ++r)
        for (std::size_t c = 0; c < l; ++c) g.at(r, c) = full.at(q - l + r, q - l + c);
    return g;
}

} // namespace polarff
