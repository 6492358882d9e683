#include "polarff/gf.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

namespace polarff {
namespace {

bool is_prime(unsigned n) {
    if (n < 2) return false;
    for (unsigned d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

// Polynomials over F_p as coefficient vectors, lowest degree first.
using Poly = std::vector<unsigned>;

void poly_trim(Poly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

Poly poly_mod(Poly a, const Poly& mod, unsigned p) {
    poly_trim(a);
    const std::size_t dm = mod.size() - 1;
    while (a.size() > dm) {
        const unsigned lead = a.back();
        const std::size_t shift = a.size() - 1 - dm;
        if (lead != 0) {
            // mod is monic, so subtract lead * x^shift * mod
            for (std::size_t j = 0; j < mod.size(); ++j) {
                unsigned& c = a[shift + j];
                c = (c + p - (lead * mod[j]) % p) % p;
            }
        }
        a.pop_back();
        poly_trim(a);
        if (a.size() <= dm) break;
    }
    return a;
}

Poly poly_mul_mod(const Poly& a, const Poly& b, const Poly& mod, unsigned p) {
    if (a.empty() || b.empty()) return {};
    Poly c(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) c[i + j] = (c[i + j] + a[i] * b[j]) % p;
    }
    return poly_mod(std::move(c), mod, p);
}

// Remainder of a by b (b monic not required; leading coefficient inverted mod p).
Poly poly_rem(Poly a, const Poly& b, unsigned p) {
    poly_trim(a);
    Poly bb = b;
    poly_trim(bb);
    const unsigned lead = bb.back();
    unsigned lead_inv = 1;
    for (unsigned t = 1; t < p; ++t)
        if (t * lead % p == 1) { lead_inv = t; break; }
    while (a.size() >= bb.size() && !a.empty()) {
        const unsigned f = a.back() * lead_inv % p;
        const std::size_t shift = a.size() - bb.size();
        for (std::size_t j = 0; j < bb.size(); ++j) {
            unsigned& c = a[shift + j];
            c = (c + p - f * bb[j] % p) % p;
        }
        poly_trim(a);
    }
    return a;
}

// Trial division by all monic polynomials of degree <= deg(f)/2.
bool poly_irreducible(const Poly& f, unsigned p) {
    const std::size_t deg = f.size() - 1;
    if (deg == 0) return false;
    if (deg == 1) return true;
    for (std::size_t d = 1; 2 * d <= deg; ++d) {
        std::uint64_t count = 1;
        for (std::size_t i = 0; i < d; ++i) count *= p;
        for (std::uint64_t t = 0; t < count; ++t) {
            Poly div(d + 1, 0);
            std::uint64_t v = t;
            for (std::size_t i = 0; i < d; ++i) {
                div[i] = unsigned(v % p);
                v /= p;
            }
            div[d] = 1;
            if (poly_rem(f, div, p).empty()) return false;
        }
    }
    return true;
}

Elem poly_to_elem(const Poly& a, unsigned p) {
    std::uint32_t v = 0;
    for (std::size_t i = a.size(); i-- > 0;) v = v * p + a[i];
    return Elem(v);
}

Poly elem_to_poly(Elem x, unsigned p) {
    Poly a;
    std::uint32_t v = x;
    while (v) {
        a.push_back(v % p);
        v /= p;
    }
    return a;
}

// Default irreducible moduli for the prime powers up to 64 with m >= 2.
// Lowest degree first; m = 1 always uses x.
const Poly* default_modulus(unsigned p, unsigned m) {
    static const Poly f4 = {1, 1, 1};           // x^2+x+1
    static const Poly f8 = {1, 1, 0, 1};        // x^3+x+1
    static const Poly f16 = {1, 1, 0, 0, 1};    // x^4+x+1
    static const Poly f32 = {1, 0, 1, 0, 0, 1}; // x^5+x^2+1
    static const Poly f64 = {1, 1, 0, 0, 0, 0, 1};
    static const Poly f9 = {2, 2, 1};           // x^2+2x+2
    static const Poly f27 = {1, 2, 0, 1};       // x^3+2x+1
    static const Poly f25 = {2, 4, 1};          // x^2+4x+2
    static const Poly f49 = {3, 6, 1};          // x^2+6x+3
    if (p == 2) {
        switch (m) {
        case 2: return &f4;
        case 3: return &f8;
        case 4: return &f16;
        case 5: return &f32;
        case 6: return &f64;
        }
    }
    if (p == 3) {
        if (m == 2) return &f9;
        if (m == 3) return &f27;
    }
    if (p == 5 && m == 2) return &f25;
    if (p == 7 && m == 2) return &f49;
    return nullptr;
}

std::vector<unsigned> prime_factors(unsigned n) {
    std::vector<unsigned> fs;
    for (unsigned d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            fs.push_back(d);
            while (n % d == 0) n /= d;
        }
    }
    if (n > 1) fs.push_back(n);
    return fs;
}

} // namespace

std::shared_ptr<const Field> Field::make(unsigned p, unsigned m) {
    if (!is_prime(p)) raise(Errc::not_prime, std::to_string(p) + " is not prime");
    if (m == 0) raise(Errc::bad_parameter, "extension degree must be >= 1");
    if (m == 1) return make(p, 1, {0, 1});
    const Poly* mod = default_modulus(p, m);
    if (!mod)
        raise(Errc::unsupported_size,
              "no default modulus for GF(" + std::to_string(p) + "^" + std::to_string(m) +
                  "); pass one explicitly");
    return make(p, m, *mod);
}

std::shared_ptr<const Field> Field::make(unsigned p, unsigned m, std::vector<unsigned> modulus) {
    if (!is_prime(p)) raise(Errc::not_prime, std::to_string(p) + " is not prime");
    if (m == 0) raise(Errc::bad_parameter, "extension degree must be >= 1");
    double qd = std::pow(double(p), double(m));
    if (qd > 65536.0) raise(Errc::unsupported_size, "field size exceeds 2^16");
    const unsigned q = unsigned(qd + 0.5);

    for (auto& c : modulus) c %= p;
    if (modulus.size() != m + 1 || modulus.back() != 1)
        raise(Errc::bad_parameter, "modulus must be monic of degree m");
    if (!poly_irreducible(modulus, p))
        raise(Errc::reducible_polynomial, "modulus is reducible over F_" + std::to_string(p));

    auto f = std::shared_ptr<Field>(new Field());
    f->p_ = p;
    f->m_ = m;
    f->q_ = q;
    f->modulus_ = modulus;

    // Slow multiply used only to bootstrap the discrete-log tables.
    auto mul_slow = [&](Elem a, Elem b) {
        return poly_to_elem(poly_mul_mod(elem_to_poly(a, p), elem_to_poly(b, p), modulus, p), p);
    };
    auto pow_slow = [&](Elem a, unsigned e) {
        Elem r = 1, base = a;
        while (e) {
            if (e & 1) r = mul_slow(r, base);
            base = mul_slow(base, base);
            e >>= 1;
        }
        return r;
    };

    const auto factors = prime_factors(q - 1);
    Elem alpha = 0;
    for (unsigned g = 1; g < q; ++g) {
        bool primitive = true;
        for (unsigned r : factors)
            if (pow_slow(Elem(g), (q - 1) / r) == 1) { primitive = false; break; }
        if (primitive) { alpha = Elem(g); break; }
    }
    f->alpha_ = alpha;

    f->exp_table_.resize(q - 1);
    f->log_table_.assign(q, 0);
    Elem cur = 1;
    for (unsigned i = 0; i < q - 1; ++i) {
        f->exp_table_[i] = cur;
        f->log_table_[cur] = std::uint16_t(i);
        cur = mul_slow(cur, alpha);
    }
    if (cur != 1) raise(Errc::bad_parameter, "primitive element bootstrap failed");

    if (p != 2 && std::size_t(q) * q <= (std::size_t(1) << 22)) {
        f->add_table_.resize(std::size_t(q) * q);
        for (unsigned a = 0; a < q; ++a)
            for (unsigned b = 0; b < q; ++b) {
                unsigned v = 0, mult = 1, aa = a, bb = b;
                for (unsigned j = 0; j < m; ++j) {
                    v += ((aa % p) + (bb % p)) % p * mult;
                    mult *= p;
                    aa /= p;
                    bb /= p;
                }
                f->add_table_[std::size_t(a) * q + b] = Elem(v);
            }
    }

    f->trace_table_.resize(q);
    for (unsigned x = 0; x < q; ++x) {
        Elem acc = 0, term = Elem(x);
        for (unsigned j = 0; j < m; ++j) {
            acc = f->add(acc, term);
            term = pow_slow(term, p);
        }
        if (acc >= p) raise(Errc::bad_parameter, "trace left the prime subfield");
        f->trace_table_[x] = acc;
    }

    f->char_table_.resize(p);
    for (unsigned t = 0; t < p; ++t) {
        if (p == 2)
            f->char_table_[t] = t == 0 ? 1.0 : -1.0;
        else
            f->char_table_[t] = std::polar(1.0, 2.0 * std::numbers::pi * double(t) / double(p));
    }

    return f;
}

Elem Field::add_slow(Elem a, Elem b) const {
    unsigned v = 0, mult = 1, aa = a, bb = b;
    for (unsigned j = 0; j < m_; ++j) {
        v += ((aa % p_) + (bb % p_)) % p_ * mult;
        mult *= p_;
        aa /= p_;
        bb /= p_;
    }
    return Elem(v);
}

Elem Field::neg(Elem a) const {
    if (p_ == 2) return a;
    unsigned v = 0, mult = 1, aa = a;
    for (unsigned j = 0; j < m_; ++j) {
        v += (p_ - aa % p_) % p_ * mult;
        mult *= p_;
        aa /= p_;
    }
    return Elem(v);
}

Elem Field::pow(Elem a, long long e) const {
    if (a == 0) {
        if (e < 0) raise(Errc::division_by_zero, "0 raised to a negative power");
        return e == 0 ? Elem(1) : Elem(0);
    }
    long long r = (std::int64_t(log_table_[a]) * (e % (q_ - 1))) % (q_ - 1);
    if (r < 0) r += q_ - 1;
    return exp_table_[std::size_t(r)];
}

unsigned Field::mul_order(Elem a) const {
    if (a == 0) raise(Errc::division_by_zero, "order of 0 is undefined");
    return (q_ - 1) / std::gcd(q_ - 1, unsigned(log_table_[a]));
}

std::vector<Elem> Field::generated_subfield(std::span<const Elem> a) const {
    std::vector<bool> in(q_, false);
    for (unsigned c = 0; c < p_; ++c) in[c] = true;
    for (Elem x : a) in[x] = true;
    bool changed = true;
    while (changed) {
        changed = false;
        std::vector<Elem> members;
        for (unsigned x = 0; x < q_; ++x)
            if (in[x]) members.push_back(Elem(x));
        for (Elem x : members)
            for (Elem y : members) {
                Elem s = add(x, y), m2 = mul(x, y);
                if (!in[s]) { in[s] = true; changed = true; }
                if (!in[m2]) { in[m2] = true; changed = true; }
            }
    }
    std::vector<Elem> out;
    for (unsigned x = 0; x < q_; ++x)
        if (in[x]) out.push_back(Elem(x));
    return out;
}

Elem primitive_element(const Field& f) { return f.alpha(); }

namespace {

std::string format_poly(const std::vector<unsigned>& coeffs) {
    std::string out;
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        if (coeffs[k] == 0) continue;
        if (!out.empty()) out += "+";
        if (k == 0) {
            out += std::to_string(coeffs[k]);
        } else {
            if (coeffs[k] != 1) out += std::to_string(coeffs[k]);
            out += "x";
            if (k > 1) out += "^" + std::to_string(k);
        }
    }
    return out.empty() ? "0" : out;
}

std::vector<unsigned> parse_poly(std::string_view s, unsigned p) {
    std::vector<unsigned> coeffs;
    auto set_coeff = [&](std::size_t deg, unsigned c) {
        if (coeffs.size() <= deg) coeffs.resize(deg + 1, 0);
        coeffs[deg] = (coeffs[deg] + c) % p;
    };
    std::size_t pos = 0;
    while (pos < s.size()) {
        std::size_t end = s.find('+', pos);
        if (end == std::string_view::npos) end = s.size();
        std::string_view term = s.substr(pos, end - pos);
        pos = end + 1;
        if (term.empty()) raise(Errc::config_error, "empty term in polynomial");
        unsigned coeff = 1;
        std::size_t i = 0;
        if (std::isdigit(static_cast<unsigned char>(term[0]))) {
            coeff = 0;
            while (i < term.size() && std::isdigit(static_cast<unsigned char>(term[i])))
                coeff = coeff * 10 + (term[i++] - '0');
        }
        std::size_t deg = 0;
        if (i < term.size()) {
            if (term[i] != 'x') raise(Errc::config_error, "bad polynomial term");
            ++i;
            if (i < term.size()) {
                if (term[i] != '^') raise(Errc::config_error, "bad polynomial term");
                ++i;
                deg = 0;
                if (i >= term.size()) raise(Errc::config_error, "missing exponent");
                while (i < term.size() && std::isdigit(static_cast<unsigned char>(term[i])))
                    deg = deg * 10 + (term[i++] - '0');
            } else {
                deg = 1;
            }
        }
        if (i != term.size()) raise(Errc::config_error, "bad polynomial term");
        set_coeff(deg, coeff);
    }
    return coeffs;
}

} // namespace

std::string Field::spec_string() const {
    return std::to_string(p_) + "^" + std::to_string(m_) + "/" + format_poly(modulus_);
}

std::shared_ptr<const Field> Field::parse(std::string_view spec) {
    std::string_view fieldpart = spec;
    std::string_view polypart;
    if (auto slash = spec.find('/'); slash != std::string_view::npos) {
        fieldpart = spec.substr(0, slash);
        polypart = spec.substr(slash + 1);
    }
    unsigned p = 0, m = 1;
    auto caret = fieldpart.find('^');
    auto to_uint = [](std::string_view v) {
        unsigned r = 0;
        if (v.empty()) raise(Errc::config_error, "empty number in field spec");
        for (char c : v) {
            if (!std::isdigit(static_cast<unsigned char>(c)))
                raise(Errc::config_error, "bad number in field spec");
            r = r * 10 + unsigned(c - '0');
        }
        return r;
    };
    if (caret == std::string_view::npos) {
        p = to_uint(fieldpart);
    } else {
        p = to_uint(fieldpart.substr(0, caret));
        m = to_uint(fieldpart.substr(caret + 1));
    }
    if (polypart.empty()) return make(p, m);
    return make(p, m, parse_poly(polypart, p));
}

SubfieldMap::SubfieldMap(FieldPtr big, FieldPtr sub) : big_(std::move(big)), sub_(std::move(sub)) {
    const Field& f = *big_;
    const Field& s = *sub_;
    if (s.p() != f.p() || f.m() % s.m() != 0)
        raise(Errc::not_a_subfield,
              s.spec_string() + " does not embed into " + f.spec_string());
    degree_ = f.m() / s.m();
    const unsigned p = f.p();

    // Embed: send the subfield's canonical generator to the smallest root of
    // the subfield modulus inside the big field.
    Elem root = 0;
    bool found = false;
    for (unsigned x = 0; x < f.q() && !found; ++x) {
        Elem acc = 0, xp = 1;
        for (std::size_t k = 0; k < s.modulus().size(); ++k) {
            Elem coeff = Elem(s.modulus()[k] % p); // prime-subfield constants share encodings
            acc = f.add(acc, f.mul(coeff, xp));
            xp = f.mul(xp, Elem(x));
        }
        if (acc == 0) {
            root = Elem(x);
            found = true;
        }
    }
    if (!found) raise(Errc::not_a_subfield, "subfield modulus has no root in the big field");

    embed_.resize(s.q());
    unembed_.assign(f.q(), Elem(0xffff));
    for (unsigned e = 0; e < s.q(); ++e) {
        Elem img = 0, rp = 1;
        unsigned v = e;
        for (unsigned j = 0; j < s.m(); ++j) {
            img = f.add(img, f.mul(Elem(v % p), rp));
            rp = f.mul(rp, root);
            v /= p;
        }
        embed_[e] = img;
        unembed_[img] = Elem(e);
    }

    // F_p change of basis: columns are embed(beta_j) * t^i for the big-field
    // basis t^i over the embedded subfield, beta_j the subfield F_p basis.
    const unsigned mm = f.m();
    const Elem t = f.m() == 1 ? Elem(1) : Elem(p); // canonical generator x
    std::vector<std::uint8_t> mat(std::size_t(mm) * mm, 0);
    Elem ti = 1;
    for (unsigned i = 0; i < degree_; ++i) {
        Elem gj = 1;
        for (unsigned j = 0; j < s.m(); ++j) {
            const Elem col_elem = f.mul(f.mul(ti, gj), 1);
            unsigned v = col_elem;
            const unsigned col = i * s.m() + j;
            for (unsigned r = 0; r < mm; ++r) {
                mat[std::size_t(r) * mm + col] = std::uint8_t(v % p);
                v /= p;
            }
            gj = f.mul(gj, root);
        }
        ti = f.mul(ti, t);
    }

    // Invert mod p by Gauss-Jordan.
    std::vector<std::uint8_t> inv(std::size_t(mm) * mm, 0);
    for (unsigned i = 0; i < mm; ++i) inv[std::size_t(i) * mm + i] = 1;
    auto inv_mod_p = [p](unsigned a) {
        for (unsigned t2 = 1; t2 < p; ++t2)
            if (a * t2 % p == 1) return t2;
        raise(Errc::bad_parameter, "non-invertible pivot");
    };
    for (unsigned col = 0; col < mm; ++col) {
        unsigned piv = col;
        while (piv < mm && mat[std::size_t(piv) * mm + col] == 0) ++piv;
        if (piv == mm) raise(Errc::not_a_subfield, "basis change matrix is singular");
        if (piv != col)
            for (unsigned j = 0; j < mm; ++j) {
                std::swap(mat[std::size_t(piv) * mm + j], mat[std::size_t(col) * mm + j]);
                std::swap(inv[std::size_t(piv) * mm + j], inv[std::size_t(col) * mm + j]);
            }
        const unsigned pi = inv_mod_p(mat[std::size_t(col) * mm + col]);
        for (unsigned j = 0; j < mm; ++j) {
            mat[std::size_t(col) * mm + j] = std::uint8_t(mat[std::size_t(col) * mm + j] * pi % p);
            inv[std::size_t(col) * mm + j] = std::uint8_t(inv[std::size_t(col) * mm + j] * pi % p);
        }
        for (unsigned r = 0; r < mm; ++r) {
            if (r == col) continue;
            const unsigned fmul = mat[std::size_t(r) * mm + col];
            if (fmul == 0) continue;
            for (unsigned j = 0; j < mm; ++j) {
                mat[std::size_t(r) * mm + j] = std::uint8_t(
                    (mat[std::size_t(r) * mm + j] + p * p - fmul * mat[std::size_t(col) * mm + j] % p) % p);
                inv[std::size_t(r) * mm + j] = std::uint8_t(
                    (inv[std::size_t(r) * mm + j] + p * p - fmul * inv[std::size_t(col) * mm + j] % p) % p);
            }
        }
    }
    inverse_ = std::move(inv);
}

std::vector<Elem> SubfieldMap::decompose(Elem x) const {
    const Field& f = *big_;
    const unsigned p = f.p(), mm = f.m(), sm = sub_->m();
    std::vector<unsigned> digits(mm);
    unsigned v = x;
    for (unsigned r = 0; r < mm; ++r) {
        digits[r] = v % p;
        v /= p;
    }
    std::vector<Elem> coords(degree_);
    for (unsigned i = 0; i < degree_; ++i) {
        unsigned enc = 0, mult = 1;
        for (unsigned j = 0; j < sm; ++j) {
            unsigned c = 0;
            const unsigned row = i * sm + j;
            for (unsigned k = 0; k < mm; ++k) c += inverse_[std::size_t(row) * mm + k] * digits[k];
            enc += c % p * mult;
            mult *= p;
        }
        coords[i] = Elem(enc);
    }
    return coords;
}

Elem SubfieldMap::recompose(std::span<const Elem> coords) const {
    if (coords.size() != degree_) raise(Errc::length_mismatch, "coordinate count mismatch");
    const Field& f = *big_;
    const Elem t = f.m() == 1 ? Elem(1) : Elem(f.p());
    Elem acc = 0, ti = 1;
    for (unsigned i = 0; i < degree_; ++i) {
        acc = f.add(acc, f.mul(embed_[coords[i]], ti));
        ti = f.mul(ti, t);
    }
    return acc;
}

std::vector<Elem> decompose(FieldPtr big, FieldPtr sub, Elem x) {
    return SubfieldMap(std::move(big), std::move(sub)).decompose(x);
}

} // namespace polarff
