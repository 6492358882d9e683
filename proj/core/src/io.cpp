#include "polarff/io.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace polarff {

namespace {

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) raise(Errc::io_error, "cannot open " + path);
    return in;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) raise(Errc::io_error, "cannot write " + path);
    return out;
}

std::string read_nonempty_line(std::istream& in, const char* what) {
    std::string line;
    while (std::getline(in, line)) {
        const auto first = line.find_first_not_of(" \t\r\n");
        if (first == std::string::npos) continue;
        const auto last = line.find_last_not_of(" \t\r\n");
        return line.substr(first, last - first + 1);
    }
    raise(Errc::io_error, std::string("unexpected end of file reading ") + what);
}

} // namespace

void write_matrix(std::ostream& out, const Matrix& m) {
    out << m.field().spec_string() << "\n" << m.rows() << " " << m.cols() << "\n";
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) out << (c ? " " : "") << m.at(r, c);
        out << "\n";
    }
}

Matrix read_matrix(std::istream& in) {
    const auto field = Field::parse(read_nonempty_line(in, "matrix field spec"));
    std::istringstream dims(read_nonempty_line(in, "matrix dimensions"));
    std::size_t rows = 0, cols = 0;
    if (!(dims >> rows >> cols) || rows == 0 || cols == 0)
        raise(Errc::io_error, "bad matrix dimensions");
    std::vector<Elem> entries(rows * cols);
    for (auto& e : entries) {
        long v = -1;
        if (!(in >> v) || v < 0 || v >= long(field->q()))
            raise(Errc::io_error, "bad matrix entry");
        e = Elem(v);
    }
    return Matrix(field, rows, cols, std::move(entries));
}

Matrix read_matrix_file(const std::string& path) {
    auto in = open_in(path);
    return read_matrix(in);
}

void write_matrix_file(const std::string& path, const Matrix& m) {
    auto out = open_out(path);
    write_matrix(out, m);
}

void write_source(std::ostream& out, const Source& src) {
    out << src.field().spec_string() << "\n" << src.output_size() << "\n";
    out << std::setprecision(17);
    for (unsigned x = 0; x < src.field().q(); ++x) {
        for (std::size_t y = 0; y < src.output_size(); ++y)
            out << (y ? " " : "") << src.joint(Elem(x), y);
        out << "\n";
    }
}

Source read_source(std::istream& in) {
    const auto field = Field::parse(read_nonempty_line(in, "source field spec"));
    std::size_t osz = 0;
    {
        std::istringstream hdr(read_nonempty_line(in, "source output size"));
        if (!(hdr >> osz) || osz == 0) raise(Errc::io_error, "bad output size");
    }
    std::vector<double> joint(std::size_t(field->q()) * osz);
    for (auto& v : joint)
        if (!(in >> v)) raise(Errc::io_error, "bad joint entry");
    return source_from_joint(field, osz, std::move(joint));
}

Source read_source_file(const std::string& path) {
    auto in = open_in(path);
    return read_source(in);
}

void write_source_file(const std::string& path, const Source& src) {
    auto out = open_out(path);
    write_source(out, src);
}

std::string source_to_string(const Source& src) {
    std::ostringstream os;
    write_source(os, src);
    return os.str();
}

void write_code_spec(std::ostream& out, const CodeSpec& spec, const std::string& kernel_ref) {
    out << spec.field->spec_string() << "\n"
        << kernel_ref << "\n"
        << spec.depth << "\n"
        << spec.frozen_set.size() << "\n";
    for (std::size_t i = 0; i < spec.frozen_set.size(); ++i)
        out << (i ? " " : "") << spec.frozen_set[i];
    out << "\n";
    for (std::size_t i = 0; i < spec.frozen_values.size(); ++i)
        out << (i ? " " : "") << spec.frozen_values[i];
    out << "\n";
}

CodeSpec read_code_spec(std::istream& in, const std::string& base_dir) {
    const auto field = Field::parse(read_nonempty_line(in, "code field spec"));
    std::string kernel_ref = read_nonempty_line(in, "kernel reference");
    std::filesystem::path kp(kernel_ref);
    if (kp.is_relative() && !base_dir.empty()) kp = std::filesystem::path(base_dir) / kp;
    Matrix kernel = read_matrix_file(kp.string());
    if (!kernel.field().same_as(*field))
        raise(Errc::io_error, "kernel field does not match the code field");

    unsigned depth = 0;
    {
        std::istringstream l(read_nonempty_line(in, "depth"));
        if (!(l >> depth)) raise(Errc::io_error, "bad depth");
    }
    std::size_t n_frozen = 0;
    {
        std::istringstream l(read_nonempty_line(in, "frozen count"));
        if (!(l >> n_frozen)) raise(Errc::io_error, "bad frozen count");
    }
    CodeSpec spec{field, std::move(kernel), depth, {}, {}};
    const std::size_t n = spec.block_length();
    spec.frozen_set.resize(n_frozen);
    spec.frozen_values.resize(n_frozen);
    for (auto& i : spec.frozen_set) {
        if (!(in >> i) || i >= n) raise(Errc::io_error, "bad frozen index");
    }
    if (!std::is_sorted(spec.frozen_set.begin(), spec.frozen_set.end()))
        raise(Errc::io_error, "frozen indices must be sorted");
    for (auto& v : spec.frozen_values) {
        long x = -1;
        if (!(in >> x) || x < 0 || x >= long(field->q())) raise(Errc::io_error, "bad frozen value");
        v = Elem(x);
    }
    return spec;
}

CodeSpec read_code_spec_file(const std::string& path) {
    auto in = open_in(path);
    return read_code_spec(in, std::filesystem::path(path).parent_path().string());
}

void write_code_spec_file(const std::string& path, const CodeSpec& spec,
                          const std::string& kernel_ref) {
    auto out = open_out(path);
    write_code_spec(out, spec, kernel_ref);
}

void write_likelihoods(std::ostream& out, const Field& f, const std::vector<Posterior>& lk) {
    out << f.spec_string() << "\n" << lk.size() << "\n";
    out << std::setprecision(17);
    for (const auto& row : lk) {
        for (std::size_t x = 0; x < row.size(); ++x) out << (x ? " " : "") << row[x];
        out << "\n";
    }
}

std::vector<Posterior> read_likelihoods(std::istream& in, const Field& expected_field) {
    const auto field = Field::parse(read_nonempty_line(in, "likelihood field spec"));
    if (!field->same_as(expected_field)) raise(Errc::io_error, "likelihood field mismatch");
    std::size_t n = 0;
    {
        std::istringstream l(read_nonempty_line(in, "likelihood count"));
        if (!(l >> n) || n == 0) raise(Errc::io_error, "bad likelihood count");
    }
    std::vector<Posterior> lk(n, Posterior(field->q()));
    for (auto& row : lk)
        for (auto& v : row) {
            if (!(in >> v) || v < 0) raise(Errc::io_error, "bad likelihood entry");
        }
    return lk;
}

std::vector<Posterior> read_likelihoods_file(const std::string& path, const Field& expected_field) {
    auto in = open_in(path);
    return read_likelihoods(in, expected_field);
}

void write_symbols(std::ostream& out, std::span<const Elem> symbols) {
    for (std::size_t i = 0; i < symbols.size(); ++i) out << (i ? " " : "") << symbols[i];
    out << "\n";
}

std::vector<Elem> read_symbols(std::istream& in, const Field& f) {
    std::vector<Elem> out;
    long v;
    while (in >> v) {
        if (v < 0 || v >= long(f.q())) raise(Errc::io_error, "symbol outside the field");
        out.push_back(Elem(v));
    }
    return out;
}

std::vector<Elem> read_symbols_file(const std::string& path, const Field& f) {
    auto in = open_in(path);
    return read_symbols(in, f);
}

} // namespace polarff
