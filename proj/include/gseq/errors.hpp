#pragma once

#include <stdexcept>
#include <string>

namespace gseq {

struct not_prime : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct zero_element : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct duplicate_element : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct mixed_modulus : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct position_out_of_range : std::out_of_range {
    using std::out_of_range::out_of_range;
};

struct bad_size : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct too_large : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct eps_range : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct below_floor : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct budget_exceeded : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct parse_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace gseq
