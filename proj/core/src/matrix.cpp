#include "polarff/matrix.hpp"

namespace polarff {

Matrix::Matrix(FieldPtr field, std::size_t rows, std::size_t cols, std::vector<Elem> entries)
    : field_(std::move(field)), rows_(rows), cols_(cols), a_(std::move(entries)) {
    if (a_.size() != rows_ * cols_) raise(Errc::length_mismatch, "entry count does not match shape");
    for (Elem e : a_)
        if (e >= field_->q()) raise(Errc::bad_parameter, "matrix entry outside the field");
}

Matrix identity(FieldPtr field, std::size_t n) {
    Matrix m(std::move(field), n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

Matrix mat_mul(const Matrix& a, const Matrix& b) {
    if (!a.field().same_as(b.field())) raise(Errc::bad_parameter, "field mismatch");
    if (a.cols() != b.rows()) raise(Errc::length_mismatch, "shape mismatch in mat_mul");
    const Field& f = a.field();
    Matrix c(a.field_ptr(), a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const Elem aik = a.at(i, k);
            if (aik == 0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j)
                c.at(i, j) = f.add(c.at(i, j), f.mul(aik, b.at(k, j)));
        }
    return c;
}

Matrix mat_invert(const Matrix& g) {
    if (g.rows() != g.cols()) raise(Errc::bad_parameter, "inverse of a non-square matrix");
    const Field& f = g.field();
    const std::size_t n = g.rows();
    Matrix a = g;
    Matrix inv = identity(g.field_ptr(), n);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && a.at(piv, col) == 0) ++piv;
        if (piv == n) raise(Errc::singular, "matrix is singular");
        if (piv != col)
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(a.at(piv, j), a.at(col, j));
                std::swap(inv.at(piv, j), inv.at(col, j));
            }
        const Elem pi = f.inv(a.at(col, col));
        for (std::size_t j = 0; j < n; ++j) {
            a.at(col, j) = f.mul(a.at(col, j), pi);
            inv.at(col, j) = f.mul(inv.at(col, j), pi);
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const Elem factor = a.at(r, col);
            if (factor == 0) continue;
            for (std::size_t j = 0; j < n; ++j) {
                a.at(r, j) = f.sub(a.at(r, j), f.mul(factor, a.at(col, j)));
                inv.at(r, j) = f.sub(inv.at(r, j), f.mul(factor, inv.at(col, j)));
            }
        }
    }
    return inv;
}

bool is_invertible(const Matrix& g) {
    if (g.rows() != g.cols()) return false;
    try {
        mat_invert(g);
        return true;
    } catch (const Error& e) {
        if (e.code() == Errc::singular) return false;
        throw;
    }
}

Matrix apply_col_perm(const Matrix& m, std::span<const std::size_t> perm) {
    if (perm.size() != m.cols()) raise(Errc::length_mismatch, "permutation size mismatch");
    Matrix out(m.field_ptr(), m.rows(), m.cols());
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t j = 0; j < m.cols(); ++j) out.at(r, j) = m.at(r, perm[j]);
    return out;
}

Matrix kronecker_power(const Matrix& g, unsigned n) {
    const Field& f = g.field();
    Matrix acc = identity(g.field_ptr(), 1);
    for (unsigned k = 0; k < n; ++k) {
        Matrix next(g.field_ptr(), acc.rows() * g.rows(), acc.cols() * g.cols());
        for (std::size_t i = 0; i < acc.rows(); ++i)
            for (std::size_t j = 0; j < acc.cols(); ++j) {
                const Elem v = acc.at(i, j);
                if (v == 0) continue;
                for (std::size_t r = 0; r < g.rows(); ++r)
                    for (std::size_t c = 0; c < g.cols(); ++c)
                        next.at(i * g.rows() + r, j * g.cols() + c) = f.mul(v, g.at(r, c));
            }
        acc = std::move(next);
    }
    return acc;
}

} // namespace polarff
