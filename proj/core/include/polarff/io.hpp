#pragma once

#include <iosfwd>
#include <string>

#include "polarff/codec.hpp"
#include "polarff/source.hpp"

namespace polarff {

/// Matrix file: field spec line, "rows cols" line, then row-major integer
/// encodings, whitespace separated.
void write_matrix(std::ostream& out, const Matrix& m);
Matrix read_matrix(std::istream& in);
Matrix read_matrix_file(const std::string& path);
void write_matrix_file(const std::string& path, const Matrix& m);

/// Source file: field spec line, output_size line, then q rows of joint
/// probabilities.
void write_source(std::ostream& out, const Source& src);
Source read_source(std::istream& in);
Source read_source_file(const std::string& path);
void write_source_file(const std::string& path, const Source& src);
std::string source_to_string(const Source& src);

/// Code spec file: field spec, kernel file reference (relative paths resolve
/// against the spec file's directory), depth, frozen count, sorted frozen
/// indices, frozen values.
void write_code_spec(std::ostream& out, const CodeSpec& spec, const std::string& kernel_ref);
CodeSpec read_code_spec(std::istream& in, const std::string& base_dir);
CodeSpec read_code_spec_file(const std::string& path);
void write_code_spec_file(const std::string& path, const CodeSpec& spec,
                          const std::string& kernel_ref);

/// Likelihood file: field spec line, N line, then N rows of q nonnegative
/// reals.
void write_likelihoods(std::ostream& out, const Field& f, const std::vector<Posterior>& lk);
std::vector<Posterior> read_likelihoods(std::istream& in, const Field& expected_field);
std::vector<Posterior> read_likelihoods_file(const std::string& path, const Field& expected_field);

/// Symbol lists (messages, codewords): whitespace-separated integers.
void write_symbols(std::ostream& out, std::span<const Elem> symbols);
std::vector<Elem> read_symbols(std::istream& in, const Field& f);
std::vector<Elem> read_symbols_file(const std::string& path, const Field& f);

} // namespace polarff
