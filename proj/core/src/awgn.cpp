#include "polarff/awgn.hpp"

#include <cmath>

namespace polarff {

AwgnSampler::AwgnSampler(FieldPtr field, double sigma) : field_(std::move(field)), sigma_(sigma) {
    const Field& f = *field_;
    if (f.p() != 2) raise(Errc::bad_parameter, "BPSK mapping needs characteristic 2");
    if (sigma <= 0) raise(Errc::bad_parameter, "noise deviation must be positive");
    const unsigned q = f.q(), m = f.m();

    // Coordinates over F_2 on the basis {alpha^j}: invert the m x m bit matrix
    // whose columns are the basis elements.
    std::vector<std::uint8_t> mat(std::size_t(m) * m), inv(std::size_t(m) * m, 0);
    Elem aj = 1;
    for (unsigned j = 0; j < m; ++j) {
        for (unsigned r = 0; r < m; ++r) mat[std::size_t(r) * m + j] = (aj >> r) & 1;
        aj = f.mul(aj, f.alpha());
    }
    for (unsigned i = 0; i < m; ++i) inv[std::size_t(i) * m + i] = 1;
    for (unsigned col = 0; col < m; ++col) {
        unsigned piv = col;
        while (piv < m && !mat[std::size_t(piv) * m + col]) ++piv;
        if (piv == m) raise(Errc::bad_parameter, "primitive powers do not form a basis");
        if (piv != col)
            for (unsigned j = 0; j < m; ++j) {
                std::swap(mat[std::size_t(piv) * m + j], mat[std::size_t(col) * m + j]);
                std::swap(inv[std::size_t(piv) * m + j], inv[std::size_t(col) * m + j]);
            }
        for (unsigned r = 0; r < m; ++r) {
            if (r == col || !mat[std::size_t(r) * m + col]) continue;
            for (unsigned j = 0; j < m; ++j) {
                mat[std::size_t(r) * m + j] ^= mat[std::size_t(col) * m + j];
                inv[std::size_t(r) * m + j] ^= inv[std::size_t(col) * m + j];
            }
        }
    }

    bits_.resize(q, std::vector<std::uint8_t>(m));
    for (unsigned x = 0; x < q; ++x)
        for (unsigned j = 0; j < m; ++j) {
            std::uint8_t b = 0;
            for (unsigned r = 0; r < m; ++r) b ^= std::uint8_t(inv[std::size_t(j) * m + r] & (x >> r));
            bits_[x][j] = b & 1;
        }
}

void AwgnSampler::likelihood_from_observation(std::span<const double> y, Posterior& out) const {
    const unsigned q = field_->q(), m = field_->m();
    out.assign(q, 0.0);
    // Normalize by the largest exponent; scaling cancels in the posteriors.
    double best = -1e300;
    std::vector<double> expo(q);
    for (unsigned xp = 0; xp < q; ++xp) {
        double e = 0;
        for (unsigned j = 0; j < m; ++j) {
            const double s = bits_[xp][j] ? -1.0 : 1.0;
            const double d = y[j] - s;
            e -= d * d;
        }
        e /= 2.0 * sigma_ * sigma_;
        expo[xp] = e;
        best = std::max(best, e);
    }
    for (unsigned xp = 0; xp < q; ++xp) out[xp] = std::exp(expo[xp] - best);
}

void AwgnSampler::sample(Elem x, Prng& rng, Posterior& likelihood_out) const {
    const unsigned m = field_->m();
    std::vector<double> y(m);
    for (unsigned j = 0; j < m; ++j) {
        const double s = bits_[x][j] ? -1.0 : 1.0;
        y[j] = s + sigma_ * rng.next_gaussian();
    }
    likelihood_from_observation(y, likelihood_out);
}

} // namespace polarff
