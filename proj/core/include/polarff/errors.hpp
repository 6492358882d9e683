#pragma once

#include <stdexcept>
#include <string>

namespace polarff {

enum class Errc {
    not_prime,
    reducible_polynomial,
    unsupported_size,
    division_by_zero,
    not_a_subfield,
    singular,
    budget_exceeded,
    size_exceeds_field,
    negative_probability,
    not_normalized,
    bad_parameter,
    non_uniform_input,
    non_uniform_input_for_channel_quantity,
    zero_likelihood,
    bad_sample_count,
    rate_infeasible,
    bad_threshold,
    length_mismatch,
    bad_kernel,
    depth_exceeded,
    unsupported,
    config_error,
    io_error,
};

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    Errc code() const { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& what) { throw Error(code, what); }

} // namespace polarff
