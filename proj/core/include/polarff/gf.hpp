#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "polarff/errors.hpp"

namespace polarff {

/// Field element, encoded as an integer in [0, q) whose base-p digits are the
/// coefficients on the basis {1, x, ..., x^(m-1)} of F_p[x]/(modulus).
using Elem = std::uint16_t;

/// Arithmetic context for GF(p^m), q = p^m <= 2^16. Immutable after
/// construction and safe to share across threads; all operations are pure.
class Field {
public:
    /// Build GF(p^m). Without an explicit modulus a fixed table of irreducible
    /// polynomials covers p^m <= 64 (prime fields of any supported size use x).
    /// Moduli are coefficient lists, lowest degree first, and must be monic of
    /// degree m; irreducibility over F_p is verified at construction.
    static std::shared_ptr<const Field> make(unsigned p, unsigned m);
    static std::shared_ptr<const Field> make(unsigned p, unsigned m, std::vector<unsigned> modulus);

    /// Parse a field spec string "p^m/poly" (e.g. "2^2/1+x+x^2"); the "/poly"
    /// and "^m" parts are optional.
    static std::shared_ptr<const Field> parse(std::string_view spec);

    unsigned p() const { return p_; }
    unsigned m() const { return m_; }
    unsigned q() const { return q_; }
    const std::vector<unsigned>& modulus() const { return modulus_; }

    /// Fixed primitive element: the smallest integer encoding with
    /// multiplicative order q-1.
    Elem alpha() const { return alpha_; }

    std::string spec_string() const;

    Elem add(Elem a, Elem b) const {
        return p_ == 2 ? Elem(a ^ b) : add_table_.empty() ? add_slow(a, b) : add_table_[std::size_t(a) * q_ + b];
    }
    Elem neg(Elem a) const;
    Elem sub(Elem a, Elem b) const { return add(a, neg(b)); }
    Elem mul(Elem a, Elem b) const {
        if (a == 0 || b == 0) return 0;
        return exp_table_[(std::uint32_t(log_table_[a]) + log_table_[b]) % (q_ - 1)];
    }
    Elem inv(Elem a) const {
        if (a == 0) raise(Errc::division_by_zero, "inv(0) in GF(" + std::to_string(q_) + ")");
        return exp_table_[(q_ - 1 - log_table_[a]) % (q_ - 1)];
    }
    Elem pow(Elem a, long long e) const;

    /// alpha^e for e in [0, q-1).
    Elem alpha_pow(long long e) const {
        long long r = e % (long long)(q_ - 1);
        if (r < 0) r += q_ - 1;
        return exp_table_[std::size_t(r)];
    }

    /// Trace onto the prime subfield: sum of x^(p^j), j = 0..m-1. The result
    /// encoding is always below p.
    Elem trace(Elem x) const { return trace_table_[x]; }

    /// Additive character chi(x) = omega_p^trace(x) with omega_p = exp(2*pi*i/p).
    /// Exact +-1 for p = 2.
    std::complex<double> character(Elem x) const { return char_table_[trace_table_[x]]; }

    /// Smallest subfield containing F_p and the given elements, closed under
    /// addition and multiplication. Returned sorted by encoding.
    std::vector<Elem> generated_subfield(std::span<const Elem> a) const;

    /// Multiplicative order (q >= elements > 0); order(0) is an error.
    unsigned mul_order(Elem a) const;

    bool same_as(const Field& other) const {
        return p_ == other.p_ && m_ == other.m_ && modulus_ == other.modulus_;
    }

private:
    Field() = default;
    Elem add_slow(Elem a, Elem b) const;

    unsigned p_ = 0, m_ = 0, q_ = 0;
    std::vector<unsigned> modulus_;
    Elem alpha_ = 0;
    std::vector<Elem> exp_table_;   // exp_table[i] = alpha^i, i in [0, q-1)
    std::vector<std::uint16_t> log_table_;
    std::vector<Elem> add_table_;   // only for small odd-characteristic fields
    std::vector<Elem> trace_table_;
    std::vector<std::complex<double>> char_table_; // indexed by trace value in [0, p)
};

using FieldPtr = std::shared_ptr<const Field>;

/// F_sub-linear coordinates of GF(p^m) over an abstract subfield GF(p^k),
/// k | m. The embedding maps the subfield generator to the smallest root of
/// the subfield modulus; the basis over the embedded subfield is
/// {1, t, ..., t^(M-1)} with t the canonical generator of the big field.
class SubfieldMap {
public:
    SubfieldMap(FieldPtr big, FieldPtr sub); // throws not_a_subfield

    const Field& big() const { return *big_; }
    const Field& sub() const { return *sub_; }
    unsigned degree() const { return degree_; } // M with sub.q^M = big.q

    Elem embed(Elem sub_elem) const { return embed_[sub_elem]; }
    std::vector<Elem> decompose(Elem x) const;
    Elem recompose(std::span<const Elem> coords) const;

private:
    FieldPtr big_, sub_;
    unsigned degree_ = 0;
    std::vector<Elem> embed_;           // sub encoding -> big encoding
    std::vector<Elem> unembed_;         // big encoding -> sub encoding (or 0xffff)
    std::vector<std::uint8_t> inverse_; // m x m matrix over F_p, row-major
};

/// One-shot convenience around SubfieldMap.
std::vector<Elem> decompose(FieldPtr big, FieldPtr sub, Elem x);

Elem primitive_element(const Field& f);

} // namespace polarff
