#pragma once

#include <span>
#include <vector>

#include "polarff/gf.hpp"

namespace polarff {

/// Row-major matrix over a finite field.
class Matrix {
public:
    Matrix(FieldPtr field, std::size_t rows, std::size_t cols)
        : field_(std::move(field)), rows_(rows), cols_(cols), a_(rows * cols, 0) {}
    Matrix(FieldPtr field, std::size_t rows, std::size_t cols, std::vector<Elem> entries);

    const Field& field() const { return *field_; }
    FieldPtr field_ptr() const { return field_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Elem at(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }
    Elem& at(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
    std::span<const Elem> row(std::size_t r) const { return {a_.data() + r * cols_, cols_}; }
    const std::vector<Elem>& entries() const { return a_; }

    bool operator==(const Matrix& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_ && a_ == other.a_ &&
               field_->same_as(*other.field_);
    }

private:
    FieldPtr field_;
    std::size_t rows_, cols_;
    std::vector<Elem> a_;
};

Matrix identity(FieldPtr field, std::size_t n);
Matrix mat_mul(const Matrix& a, const Matrix& b);
Matrix mat_invert(const Matrix& g); // throws singular
bool is_invertible(const Matrix& g);

/// Reorder columns: result(r, j) = m(r, perm[j]).
Matrix apply_col_perm(const Matrix& m, std::span<const std::size_t> perm);

/// Kronecker power with standard most-significant-digit-first packing.
Matrix kronecker_power(const Matrix& g, unsigned n);

} // namespace polarff
