#include "polarff/stats.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

namespace polarff {

double Stats::z_max() const {
    if (!z_max_) raise(Errc::non_uniform_input_for_channel_quantity, "z_max needs uniform input");
    return *z_max_;
}

double Stats::z_min() const {
    if (!z_min_) raise(Errc::non_uniform_input_for_channel_quantity, "z_min needs uniform input");
    return *z_min_;
}

double Stats::z_pair_at(Elem x, Elem xp) const {
    if (!z_pair) raise(Errc::non_uniform_input_for_channel_quantity, "pairwise Z needs uniform input");
    const std::size_t q = std::size_t(std::sqrt(double(z_pair->size())) + 0.5);
    return (*z_pair)[std::size_t(x) * q + xp];
}

Stats stats(const Source& src) {
    const Field& f = src.field();
    const unsigned q = f.q();
    const std::size_t osz = src.output_size();
    const double logq = std::log(double(q));

    Stats st;
    st.h = 0;
    st.pe = 0;
    st.t = 0;
    st.z_d.assign(q - 1, 0.0);
    st.s_w.assign(q - 1, 0.0);

    std::vector<std::complex<double>> chi(q);
    for (unsigned e = 0; e < q; ++e) chi[e] = f.character(Elem(e));

    std::vector<double> col(q);
    for (std::size_t y = 0; y < osz; ++y) {
        double mass = 0;
        for (unsigned x = 0; x < q; ++x) {
            col[x] = src.joint(Elem(x), y);
            mass += col[x];
        }
        if (mass <= 0) continue;

        double best = 0;
        for (unsigned x = 0; x < q; ++x) {
            best = std::max(best, col[x]);
            if (col[x] > 0) st.h -= col[x] * std::log(col[x] / mass);
            st.t += std::abs(col[x] - mass / q);
        }
        st.pe += best;

        for (unsigned d = 1; d < q; ++d) {
            double zd = 0;
            for (unsigned x = 0; x < q; ++x) zd += std::sqrt(col[x] * col[f.add(Elem(x), Elem(d))]);
            st.z_d[d - 1] += zd;
        }

        for (unsigned w = 1; w < q; ++w) {
            std::complex<double> acc = 0;
            for (unsigned x = 0; x < q; ++x)
                if (col[x] != 0) acc += col[x] * chi[f.mul(Elem(w), Elem(x))];
            st.s_w[w - 1] += std::abs(acc);
        }
    }

    st.h /= logq;
    st.pe = 1.0 - st.pe;
    st.z = 0;
    for (double zd : st.z_d) st.z += zd;
    st.z /= q - 1;
    st.s = 0;
    st.s_max = 0;
    st.s_min = 1;
    for (double sw : st.s_w) {
        st.s += sw;
        st.s_max = std::max(st.s_max, sw);
        st.s_min = std::min(st.s_min, sw);
    }
    st.s /= q - 1;

    if (src.uniform_input()) {
        std::vector<double> pair(std::size_t(q) * q, 0.0);
        for (std::size_t y = 0; y < osz; ++y)
            for (unsigned x = 0; x < q; ++x) {
                const double jx = src.joint(Elem(x), y);
                if (jx == 0) continue;
                for (unsigned xp = 0; xp < q; ++xp) {
                    const double jxp = src.joint(Elem(xp), y);
                    if (jxp != 0) pair[std::size_t(x) * q + xp] += q * std::sqrt(jx * jxp);
                }
            }
        double zmax = 0, zmin = 1;
        for (unsigned x = 0; x < q; ++x)
            for (unsigned xp = 0; xp < q; ++xp) {
                if (x == xp) continue;
                zmax = std::max(zmax, pair[std::size_t(x) * q + xp]);
                zmin = std::min(zmin, pair[std::size_t(x) * q + xp]);
            }
        st.z_pair = std::move(pair);
        st.z_max_ = zmax;
        st.z_min_ = zmin;
    }
    return st;
}

double pe_lower_bound_from_z(unsigned q, double z) {
    const double a = std::sqrt(std::max(0.0, 1.0 + (q - 1) * z));
    const double b = std::sqrt(std::max(0.0, 1.0 - z));
    return double(q - 1) / (double(q) * q) * (a - b) * (a - b);
}

double pe_upper_bound_from_z(unsigned q, double z) {
    double best = 1;
    for (unsigned k = 1; k < q; ++k)
        best = std::min(best, ((q - 1) * z + double(k) * (k - 1)) / (double(k) * (k + 1)));
    return best;
}

double t_lower_bound_from_pe(unsigned q, double pe) {
    return 2.0 * (double(q - 1) / q - pe);
}

double t_upper_bound_from_pe(unsigned q, double pe) {
    double best = 0;
    for (unsigned k = 1; k < q; ++k)
        best = std::max(best, double(k) * (k + 1) * pe - double(k) * (k - 1));
    return 2.0 * (q - 1) / q - 2.0 / q * best;
}

double s_lower_bound_from_pe(unsigned q, double pe) {
    return 1.0 - double(q) / (q - 1) * pe;
}

double s_upper_bound_from_pe(unsigned q, double pe) {
    double best = std::numeric_limits<double>::infinity();
    const double qq = double(q) / (q - 1);
    for (unsigned k = 1; k < q; ++k) {
        const double lo = double(k - 1) / k, hi = double(k) / (k + 1);
        const double a = std::sqrt(std::max(0.0, 1.0 - qq * lo));
        const double b = std::sqrt(std::max(0.0, 1.0 - qq * hi));
        const double v = double(k) * (k + 1) * ((hi - pe) * a + (pe - lo) * b);
        best = std::min(best, v);
    }
    return best;
}

} // namespace polarff
