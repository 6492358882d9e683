#include "polarff/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <numeric>
#include <ostream>
#include <sstream>

#include "polarff/io.hpp"
#include "polarff/kernel.hpp"
#include "polarff/transform.hpp"

namespace polarff {

ExperimentConfig ExperimentConfig::from_stream(std::istream& in) {
    ExperimentConfig cfg;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
        if (eq == std::string::npos)
            raise(Errc::config_error, "line " + std::to_string(lineno) + ": expected key = value");
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r\n");
            if (a == std::string::npos) return std::string();
            const auto b = s.find_last_not_of(" \t\r\n");
            return s.substr(a, b - a + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        try {
            if (key == "sigma")
                cfg.sigma = std::stod(value);
            else if (key == "seed")
                cfg.seed = std::stoull(value);
            else if (key == "samples")
                cfg.samples = std::stoull(value);
            else if (key == "full")
                cfg.full = value == "1" || value == "true" || value == "yes";
            else if (key == "threads")
                cfg.n_threads = unsigned(std::stoul(value));
            else if (key == "out")
                cfg.out_path = value;
            else
                raise(Errc::config_error, "unknown config key: " + key);
        } catch (const std::invalid_argument&) {
            raise(Errc::config_error, "bad value for " + key);
        } catch (const std::out_of_range&) {
            raise(Errc::config_error, "bad value for " + key);
        }
    }
    if (cfg.sigma <= 0) raise(Errc::config_error, "sigma must be positive");
    if (cfg.samples < 1000) raise(Errc::config_error, "need at least 1000 samples");
    return cfg;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) raise(Errc::io_error, "cannot open " + path);
    return from_stream(in);
}

std::vector<Fig2Point> run_fig2(const ExperimentConfig& config) {
    struct Arm {
        std::string name;
        FieldPtr field;
        Matrix kernel;
        std::vector<unsigned> depths;
        unsigned bits_per_symbol;
    };
    const auto f2 = Field::make(2, 1);
    const auto f4 = Field::make(2, 2);
    Matrix g1(f2, 2, 2, {1, 0, 1, 1});

    std::vector<Arm> arms;
    arms.push_back({"binary", f2, g1, {7, 9}, 1});
    arms.push_back({"quaternary", f4, rs_matrix(f4), {3, 4}, 2});
    if (config.full) {
        arms[0].depths.insert(arms[0].depths.end(), {11, 13});
        arms[1].depths.insert(arms[1].depths.end(), {5, 6});
    }

    std::vector<Fig2Point> points;
    for (std::size_t ai = 0; ai < arms.size(); ++ai) {
        const Arm& arm = arms[ai];
        const AwgnSampler sampler(arm.field, config.sigma);
        for (unsigned depth : arm.depths) {
            const std::uint64_t seed = config.seed ^ (0x9E37u * (ai + 1)) ^ (depth * 0x85EBCA6BULL);
            const auto stats = mc_all_subchannels(sampler, arm.kernel, depth, config.samples, seed,
                                                  config.n_threads);
            std::vector<double> pe(stats.size());
            for (std::size_t i = 0; i < stats.size(); ++i) pe[i] = stats[i].pe.value;
            std::sort(pe.begin(), pe.end());
            const unsigned bits = unsigned(stats.size() * arm.bits_per_symbol);
            double acc = 0;
            for (std::size_t k = 1; k <= pe.size(); ++k) {
                acc += pe[k - 1];
                points.push_back({arm.name, bits, double(k) / double(pe.size()), acc});
            }
        }
    }
    return points;
}

void write_fig2_csv(std::ostream& out, const std::vector<Fig2Point>& points) {
    out << "arm,blocklength_bits,rate,union_bound\n";
    out << std::setprecision(12);
    for (const auto& p : points)
        out << p.arm << "," << p.blocklength_bits << "," << p.rate << "," << p.union_bound << "\n";
}

double BecPairHistogram::mean() const {
    double sum = 0, comp = 0;
    for (double v : h) {
        const double t = v - comp;
        const double s = sum + t;
        comp = (s - sum) - t;
        sum = s;
    }
    return h.empty() ? 0.0 : sum / double(h.size());
}

double BecPairHistogram::band_mass(double lo, double hi, bool open) const {
    std::size_t count = 0;
    for (double v : h)
        count += open ? (v > lo && v < hi) : (v >= lo && v <= hi);
    return h.empty() ? 0.0 : double(count) / double(h.size());
}

namespace {

void require_binary_arikan_kernel(const Matrix& kernel) {
    if (kernel.rows() != 2 || kernel.cols() != 2)
        raise(Errc::bad_kernel, "expected a 2x2 kernel");
    for (Elem e : kernel.entries())
        if (e > 1) raise(Errc::bad_kernel, "kernel entries must lie in the prime subfield");
    const auto sf = standard_form(kernel);
    const std::vector<Elem> want{1, 0, 1, 1};
    if (sf.form.entries() != want)
        raise(Errc::bad_kernel, "kernel does not reduce to [[1,0],[1,1]]");
}

} // namespace

BecPairHistogram bec_pair_counterexample(const Matrix& kernel, double eps0, double eps1,
                                         unsigned depth) {
    require_binary_arikan_kernel(kernel);
    if (depth > 20) raise(Errc::depth_exceeded, "depth capped at 20");
    if (eps0 < 0 || eps0 > 1 || eps1 < 0 || eps1 > 1)
        raise(Errc::bad_parameter, "erasure probabilities must lie in [0,1]");

    BecPairHistogram hist;
    hist.h.resize(std::size_t(1) << depth);
    // Both components ride the same digit path; branch 0 worsens each erasure
    // rate to 2z - z^2 and branch 1 improves it to z^2.
    std::size_t out = 0;
    struct Frame {
        double z0, z1;
        unsigned level;
    };
    std::vector<Frame> frames{{eps0, eps1, 0}};
    while (!frames.empty()) {
        const Frame fr = frames.back();
        frames.pop_back();
        if (fr.level == depth) {
            hist.h[out++] = 0.5 * (fr.z0 + fr.z1);
            continue;
        }
        // branch 1 pushed first so branch 0 pops first (path order is not
        // semantically meaningful, the histogram covers all paths)
        frames.push_back({fr.z0 * fr.z0, fr.z1 * fr.z1, fr.level + 1});
        frames.push_back({2 * fr.z0 - fr.z0 * fr.z0, 2 * fr.z1 - fr.z1 * fr.z1, fr.level + 1});
    }
    return hist;
}

BecPairHistogram bec_pair_counterexample(double eps0, double eps1, unsigned depth) {
    const auto f4 = Field::make(2, 2);
    return bec_pair_counterexample(Matrix(f4, 2, 2, {1, 0, 1, 1}), eps0, eps1, depth);
}

Source bec_pair_source(FieldPtr f4, double eps0, double eps1) {
    if (f4->p() != 2 || f4->m() != 2) raise(Errc::bad_parameter, "expected GF(4)");
    // Symbol x = v0 + alpha * v1; with the canonical modulus the coordinates
    // are the base-2 digits of the encoding. Outputs: (y0, y1), each component
    // erased independently, id = y0 * 3 + y1 with erased = 2.
    const double e[2] = {eps0, eps1};
    std::vector<double> joint(4 * 9, 0.0);
    for (unsigned x = 0; x < 4; ++x) {
        const unsigned v[2] = {x & 1u, (x >> 1) & 1u};
        for (unsigned y0 = 0; y0 < 3; ++y0)
            for (unsigned y1 = 0; y1 < 3; ++y1) {
                const unsigned y[2] = {y0, y1};
                double w = 0.25;
                for (unsigned c = 0; c < 2; ++c) {
                    if (y[c] == 2)
                        w *= e[c];
                    else if (y[c] == v[c])
                        w *= 1 - e[c];
                    else
                        w = 0;
                }
                joint[x * 9 + y0 * 3 + y1] = w;
            }
    }
    return Source(std::move(f4), 9, std::move(joint), Source::Validate::renormalize);
}

namespace {

double detect_erasure_rate(const Source& channel) {
    if (!channel.uniform_input())
        raise(Errc::unsupported, "speed recursion needs a uniform-input erasure channel");
    const unsigned q = channel.field().q();
    double eps = 0;
    for (std::size_t y = 0; y < channel.output_size(); ++y) {
        const double mass = channel.output_mass(y);
        if (mass <= 0) continue;
        const auto post = channel.posterior(y);
        const double maxp = *std::max_element(post.begin(), post.end());
        if (maxp > 1 - 1e-9) continue; // revealing output
        bool uniform = true;
        for (double p : post) uniform = uniform && std::abs(p - 1.0 / q) < 1e-9;
        if (!uniform)
            raise(Errc::unsupported, "outputs must either reveal the input or erase it");
        eps += mass;
    }
    return eps;
}

} // namespace

double speed_empiric(const Matrix& kernel, const Source& channel, unsigned depth,
                     double threshold) {
    require_binary_arikan_kernel(kernel);
    if (depth == 0 || depth > 26) raise(Errc::bad_parameter, "depth must lie in [1, 26]");
    const double eps = detect_erasure_rate(channel);

    // Exact erasure recursion tracked in the log domain once z drops below
    // the switch point, so no path underflows.
    struct State {
        bool log_mode;
        double z;   // direct value when !log_mode
        double lam; // ln z when log_mode
    };
    constexpr double kSwitch = 1e-6;
    const double need = std::exp2(threshold * depth); // -log2 z must reach this

    std::size_t count = 0;
    struct Frame {
        State s;
        unsigned level;
    };
    std::vector<Frame> frames{{State{false, eps, 0.0}, 0}};
    while (!frames.empty()) {
        Frame fr = frames.back();
        frames.pop_back();
        if (fr.level == depth) {
            bool ok;
            if (fr.s.log_mode)
                ok = -fr.s.lam / std::numbers::ln2 >= need;
            else if (fr.s.z <= 0)
                ok = true; // -log 0 = infinity by convention
            else
                ok = -std::log2(fr.s.z) >= need;
            count += ok;
            continue;
        }
        State good, bad;
        if (fr.s.log_mode) {
            good = {true, 0.0, 2 * fr.s.lam};
            bad = {true, 0.0, fr.s.lam + std::log(2.0 - std::exp(fr.s.lam))};
        } else {
            const double z = fr.s.z;
            bad = {false, 2 * z - z * z, 0.0};
            if (z > 0 && z < kSwitch)
                good = {true, 0.0, 2 * std::log(z)};
            else
                good = {false, z * z, 0.0};
        }
        frames.push_back({good, fr.level + 1});
        frames.push_back({bad, fr.level + 1});
    }
    return double(count) / double(std::size_t(1) << depth);
}

Source random_source(FieldPtr field, std::size_t output_size, Prng& rng) {
    const unsigned q = field->q();
    std::vector<double> joint(std::size_t(q) * output_size);
    double total = 0;
    for (auto& v : joint) {
        v = -std::log(1.0 - rng.next_double()); // exponential: uniform on the simplex
        total += v;
    }
    for (auto& v : joint) v /= total;
    return Source(std::move(field), output_size, std::move(joint), Source::Validate::renormalize);
}

Source random_channel(FieldPtr field, std::size_t output_size, Prng& rng) {
    const unsigned q = field->q();
    std::vector<double> joint(std::size_t(q) * output_size);
    for (unsigned x = 0; x < q; ++x) {
        double row = 0;
        for (std::size_t y = 0; y < output_size; ++y) {
            joint[std::size_t(x) * output_size + y] = -std::log(1.0 - rng.next_double());
            row += joint[std::size_t(x) * output_size + y];
        }
        for (std::size_t y = 0; y < output_size; ++y)
            joint[std::size_t(x) * output_size + y] /= row * q;
    }
    return Source(std::move(field), output_size, std::move(joint), Source::Validate::renormalize);
}

Matrix random_invertible(FieldPtr field, std::size_t l, Prng& rng) {
    while (true) {
        Matrix m(field, l, l);
        for (std::size_t r = 0; r < l; ++r)
            for (std::size_t c = 0; c < l; ++c) m.at(r, c) = Elem(rng.next_below(field->q()));
        if (is_invertible(m)) return m;
    }
}

namespace {

struct FamilyCheck {
    FamilyReport report;
    double tol;

    explicit FamilyCheck(std::string name, double tolerance) : tol(tolerance) {
        report.family = std::move(name);
    }
    /// margin >= 0 means the inequality holds with that much room.
    void observe(double margin, const Source* src) {
        ++report.n_cases;
        if (report.n_cases == 1 || margin < report.worst_slack) report.worst_slack = margin;
        if (margin < -tol && report.violations++ == 0 && src)
            report.violating_source = source_to_string(*src);
    }
    void observe_abs(double slack, const Source* src) {
        ++report.n_cases;
        const double margin = -std::abs(slack);
        if (report.n_cases == 1 || margin < report.worst_slack) report.worst_slack = margin;
        if (std::abs(slack) > tol && report.violations++ == 0 && src)
            report.violating_source = source_to_string(*src);
    }
};

FieldPtr field_for(unsigned q) {
    switch (q) {
    case 2: return Field::make(2, 1);
    case 3: return Field::make(3, 1);
    case 4: return Field::make(2, 2);
    case 5: return Field::make(5, 1);
    case 7: return Field::make(7, 1);
    case 8: return Field::make(2, 3);
    default: raise(Errc::bad_parameter, "unsupported battery field");
    }
}

Source battery_source(FieldPtr field, Prng& rng) {
    const std::size_t osz = 1 + rng.next_below(6);
    const unsigned kind = unsigned(rng.next_below(4));
    const unsigned q = field->q();
    if (kind == 3) return random_source(field, osz, rng);
    if (kind == 2) return random_channel(field, osz, rng);
    // near-deterministic / near-uniform mixtures keep the extremal regimes
    // of the batteries populated
    const double delta = std::pow(10.0, -(3.0 + 6.0 * rng.next_double()));
    std::vector<double> joint(std::size_t(q) * q, 0.0);
    for (unsigned x = 0; x < q; ++x)
        for (unsigned y = 0; y < q; ++y) {
            const double clean = x == y ? 1.0 - delta : delta / (q - 1);
            joint[std::size_t(x) * q + y] =
                (kind == 0 ? clean : (1.0 / q) * (1 - delta) + delta * clean) / q;
        }
    return Source(std::move(field), q, std::move(joint), Source::Validate::renormalize);
}

} // namespace

std::vector<FamilyReport> verify_inequalities(const BatteryConfig& config) {
    std::vector<FamilyReport> reports;
    const std::size_t n_cases = config.cases_per_family;

    // Appendix-style P_e/T/S bounds, the Z_d triangle, the Fourier energy
    // identity and the entropy sandwich share one randomized battery.
    {
        FamilyCheck pe_z("pe_z_bounds", 1e-9), t_pe("t_pe_bounds", 1e-9),
            s_pe("s_pe_bounds", 1e-9), tri("zd_triangle", 1e-9), par("parseval", 1e-10),
            sand("entropy_l1_sandwich", 0.0);
        const unsigned qs[] = {2, 3, 4, 5};
        for (std::size_t c = 0; c < n_cases; ++c) {
            Prng rng(config.seed, c);
            const auto field = field_for(qs[c % 4]);
            const unsigned q = field->q();
            const Source src = battery_source(field, rng);
            const Stats st = stats(src);

            pe_z.observe(st.pe - pe_lower_bound_from_z(q, st.z), &src);
            pe_z.observe(pe_upper_bound_from_z(q, st.z) - st.pe, &src);
            t_pe.observe(st.t - t_lower_bound_from_pe(q, st.pe), &src);
            t_pe.observe(t_upper_bound_from_pe(q, st.pe) - st.t, &src);
            s_pe.observe(st.s - s_lower_bound_from_pe(q, st.pe), &src);
            s_pe.observe(s_upper_bound_from_pe(q, st.pe) - st.s, &src);

            const Field& f = src.field();
            for (unsigned d1 = 1; d1 < q; ++d1)
                for (unsigned d2 = 1; d2 < q; ++d2) {
                    const Elem dsum = f.add(Elem(d1), Elem(d2));
                    if (dsum == 0) continue;
                    const double lhs = std::sqrt(std::max(0.0, 1 - st.z_d[dsum - 1]));
                    const double rhs = std::sqrt(std::max(0.0, 1 - st.z_d[d1 - 1])) +
                                       std::sqrt(std::max(0.0, 1 - st.z_d[d2 - 1]));
                    tri.observe(rhs - lhs, &src);
                }

            for (std::size_t y = 0; y < src.output_size(); ++y) {
                if (src.output_mass(y) <= 0) continue;
                const auto post = src.posterior(y);
                double lhs = 0, rhs = 0;
                for (unsigned w = 0; w < q; ++w) {
                    std::complex<double> acc = 0;
                    for (unsigned x = 0; x < q; ++x)
                        acc += post[x] * f.character(f.mul(Elem(w), Elem(x)));
                    lhs += std::norm(acc);
                }
                for (unsigned x = 0; x < q; ++x) rhs += post[x] * post[x];
                par.observe_abs(lhs - q * rhs, &src);
            }

            bool ok = true;
            if (st.h < 1e-4 && st.z >= 0.05) ok = false;
            if (st.z < 1e-4 && st.h >= 0.05) ok = false;
            if (st.h > 1 - 1e-4 && st.z <= 0.95) ok = false;
            if (st.z > 1 - 1e-4 && st.h <= 0.95) ok = false;
            sand.observe(ok ? 0.0 : -1.0, &src);
        }
        reports.push_back(pe_z.report);
        reports.push_back(t_pe.report);
        reports.push_back(s_pe.report);
        reports.push_back(tri.report);
        reports.push_back(par.report);
        reports.push_back(sand.report);
    }

    // Generalized MacWilliams identity, checked pointwise on unmerged
    // transforms of small sources.
    {
        FamilyCheck mac("macwilliams", 1e-9);
        for (std::size_t c = 0; c < n_cases; ++c) {
            Prng rng(config.seed ^ 0xAB1Eu, c);
            const auto field = field_for(c % 2 ? 3 : 2);
            const Field& f = *field;
            const unsigned q = f.q();
            const Source src = random_source(field, 2, rng);
            const Matrix g = random_invertible(field, 2, rng);
            const Matrix h = mat_invert(g);

            TransformOptions opts;
            opts.merge = false;
            const auto subs = basic_transform(src, g, opts);
            const std::size_t osz = src.output_size();

            for (unsigned i = 0; i < 2; ++i) {
                const Source& sub = subs[i];
                for (unsigned wi = 0; wi < q; ++wi) {
                    for (std::size_t out = 0; out < sub.output_size(); ++out) {
                        // unmerged id: big-endian u prefix then y digits
                        std::size_t rem = out;
                        std::size_t ydigits[2];
                        ydigits[1] = rem % osz;
                        rem /= osz;
                        ydigits[0] = rem % osz;
                        rem /= osz;
                        const Elem u0 = Elem(rem);

                        std::complex<double> lhs = 0;
                        for (unsigned v = 0; v < q; ++v)
                            lhs += sub.joint(Elem(v), out) *
                                   f.character(f.mul(Elem(wi), Elem(v)));

                        std::complex<double> rhs = 0;
                        const std::size_t w_count = i == 0 ? 1 : q;
                        for (std::size_t wp = 0; wp < w_count; ++wp) {
                            // z = sum_{j<=i} w_j * column_j(H), with w_i = wi
                            Elem z0, z1;
                            std::complex<double> phase = 1.0;
                            if (i == 0) {
                                z0 = f.mul(Elem(wi), h.at(0, 0));
                                z1 = f.mul(Elem(wi), h.at(1, 0));
                            } else {
                                const Elem w0 = Elem(wp);
                                z0 = f.add(f.mul(w0, h.at(0, 0)), f.mul(Elem(wi), h.at(0, 1)));
                                z1 = f.add(f.mul(w0, h.at(1, 0)), f.mul(Elem(wi), h.at(1, 1)));
                                phase = std::conj(f.character(f.mul(w0, u0)));
                            }
                            std::complex<double> term = phase;
                            const Elem zz[2] = {z0, z1};
                            for (unsigned j = 0; j < 2; ++j) {
                                std::complex<double> fj = 0;
                                for (unsigned zv = 0; zv < q; ++zv)
                                    fj += src.joint(Elem(zv), ydigits[j]) *
                                          f.character(f.mul(zz[j], Elem(zv)));
                                term *= fj;
                            }
                            rhs += term;
                        }
                        rhs /= double(i == 0 ? 1 : q);
                        mac.observe_abs(std::abs(lhs - rhs), &src);
                    }
                }
            }
        }
        reports.push_back(mac.report);
    }

    // Kernel recursion bounds for Z on channels and S on sources.
    {
        FamilyCheck zrec("z_recursion", 1e-9), srec("s_recursion", 1e-9);
        const unsigned qs[] = {2, 3, 4};
        for (std::size_t c = 0; c < n_cases; ++c) {
            Prng rng(config.seed ^ 0xC0FFEEu, c);
            const auto field = field_for(qs[c % 3]);
            const unsigned q = field->q();
            const std::size_t l = 2 + c % 2;
            const Matrix g = random_invertible(field, l, rng);
            const auto pd = partial_distances(g);

            const Source chan = random_channel(field, 1 + rng.next_below(4), rng);
            const Stats base = stats(chan);
            const auto subs = basic_transform(chan, g);
            for (std::size_t i = 0; i < l; ++i) {
                const Stats si = stats(subs[i]);
                const double zmax_bound =
                    std::pow(double(q), double(l - 1 - i)) * std::pow(base.z_max(), double(pd.dc[i]));
                zrec.observe(zmax_bound - si.z_max(), &chan);
                zrec.observe(si.z_min() - std::pow(base.z_min(), double(pd.dc[i])), &chan);
            }

            const Source src = random_source(field, 1 + rng.next_below(4), rng);
            const Stats sbase = stats(src);
            const auto ssubs = basic_transform(src, g);
            for (std::size_t i = 0; i < l; ++i) {
                const Stats si = stats(ssubs[i]);
                const double smax_bound =
                    std::pow(double(q), double(i)) * std::pow(sbase.s_max, double(pd.ds[i]));
                srec.observe(smax_bound - si.s_max, &src);
                srec.observe(si.s_min - std::pow(sbase.s_min, double(pd.ds[i])), &src);
            }
        }
        reports.push_back(zrec.report);
        reports.push_back(srec.report);
    }

    // Cutoff-rate inequality for the 2x2 standard form [[1,0],[gamma,1]] on
    // symmetric channels.
    {
        FamilyCheck cut("cutoff_rate", 1e-9);
        const unsigned qs[] = {2, 3, 4, 5};
        for (std::size_t c = 0; c < n_cases; ++c) {
            Prng rng(config.seed ^ 0xFACADEu, c);
            const auto field = field_for(qs[c % 4]);
            const Field& f = *field;
            const unsigned q = f.q();
            const Source chan = symmetrize(random_source(field, 1 + rng.next_below(3), rng));
            const Stats base = stats(chan);
            const Elem gamma = Elem(1 + rng.next_below(q - 1));

            Matrix g(field, 2, 2);
            g.at(0, 0) = 1;
            g.at(1, 0) = gamma;
            g.at(1, 1) = 1;
            const auto subs = basic_transform(chan, g);
            const double lhs = base.h - stats(subs[1]).h;

            double inner = 0;
            for (unsigned d = 1; d < q; ++d) {
                const double zgd = base.z_d[f.mul(gamma, Elem(d)) - 1];
                inner += zgd * zgd * (1 - base.z_d[d - 1]);
            }
            const double rhs = -std::log(1.0 - inner / q) / std::log(double(q));
            cut.observe(lhs - rhs, &chan);
        }
        reports.push_back(cut.report);
    }

    // Tight families: the q-ary symmetric channel sits on the P_e lower
    // bound, the subset channel on the upper bound.
    {
        FamilyCheck qt("qsc_tightness", 1e-9), sub("subset_tightness", 1e-9);
        const unsigned qs[] = {2, 3, 4, 5, 7, 8};
        for (std::size_t c = 0; c < n_cases; ++c) {
            Prng rng(config.seed ^ 0x70A5Eu, c);
            const auto field = field_for(qs[c % 6]);
            const unsigned q = field->q();
            const double eps_q = rng.next_double() * (q - 1) / q;
            const Source ch = qsc(field, eps_q);
            const Stats st = stats(ch);
            qt.observe_abs(st.pe - pe_lower_bound_from_z(q, st.z), &ch);

            if (q >= 3) {
                const unsigned k = 1 + unsigned(rng.next_below(q - 1));
                const double eps_s = rng.next_double();
                const Source sc = subset_channel(field, k, eps_s);
                const Stats ss = stats(sc);
                sub.observe_abs(ss.pe - pe_upper_bound_from_z(q, ss.z), &sc);
                sub.observe_abs(ss.z - (k - 1 + eps_s) / (q - 1), &sc);
            }
        }
        reports.push_back(qt.report);
        reports.push_back(sub.report);
    }

    return reports;
}

void write_battery_report(std::ostream& out, const std::vector<FamilyReport>& reports) {
    out << "family,cases,violations,worst_slack,status\n";
    out << std::setprecision(6);
    for (const auto& r : reports)
        out << r.family << "," << r.n_cases << "," << r.violations << "," << r.worst_slack << ","
            << (r.pass() ? "pass" : "FAIL") << "\n";
}

} // namespace polarff
