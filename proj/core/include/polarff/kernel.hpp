#pragma once

#include <optional>

#include "polarff/matrix.hpp"

namespace polarff {

/// Lower unit-triangular form of an invertible matrix, together with the
/// transcript that produced it: form = V * G * P where V is invertible upper
/// triangular and P permutes columns (form(r, j) = (V*G)(r, col_perm[j])).
struct StandardForm {
    Matrix form;
    Matrix v;
    std::vector<std::size_t> col_perm;
};

/// Bottom-up elimination: row i is reduced only by rows below it, pivots are
/// scaled to 1 through the diagonal of V, and pivot columns are chosen as the
/// first usable column in preference order (leftmost by default).
StandardForm standard_form(const Matrix& g);
StandardForm standard_form(const Matrix& g, std::span<const std::size_t> col_preference);

enum class PolarizationClass {
    polarizing,
    non_polarizing_identity,
    non_polarizing_subfield,
};

struct Classification {
    PolarizationClass kind;
    unsigned subfield_size = 0; // set for non_polarizing_subfield
    bool operator==(const Classification&) const = default;
};

/// Polarization test: identity standard form never polarizes; otherwise the
/// matrix polarizes every source iff the standard-form entries generate the
/// whole field. Independent of the pivot preference.
Classification classify_polarizing(const Matrix& g);
Classification classify_polarizing(const Matrix& g, std::span<const std::size_t> col_preference);

struct PartialDistances {
    std::vector<unsigned> dc; // row i of G vs span of rows i+1..l-1
    std::vector<unsigned> ds; // column i of G^-1 vs span of columns 0..i-1
};

/// Brute-force span enumeration; requires q^l <= 2^24.
PartialDistances partial_distances(const Matrix& g);

struct Exponents {
    double ec; // mean log_l of channel partial distances
    double es; // same on the source side
    double vc; // variance of log_l D_c
};

Exponents exponents(const PartialDistances& pd);
Exponents exponents(const Matrix& g);

struct KernelReport {
    StandardForm sf;
    Classification cls;
    PartialDistances pd;
    Exponents ex;
};

KernelReport analyze_kernel(const Matrix& g);

/// The q x q Reed-Solomon kernel built from the field's fixed primitive
/// element alpha: entry (i, j) = alpha^(i*j) for i, j < q-1, last column zero
/// except the corner, last row all ones.
Matrix rs_matrix(FieldPtr field);

/// Lower-right l x l block of rs_matrix; l <= q.
Matrix rs_submatrix(FieldPtr field, std::size_t l);

} // namespace polarff
