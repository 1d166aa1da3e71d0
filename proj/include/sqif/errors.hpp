#pragma once

#include <stdexcept>
#include <string>

namespace sqif {

// Rejected at an API boundary: malformed or out-of-contract input.
struct input_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct even_input_error : input_error {
    explicit even_input_error(const std::string& what = "input must be odd") : input_error(what) {}
};

struct square_input_error : input_error {
    explicit square_input_error(const std::string& what = "input is a perfect square") : input_error(what) {}
};

struct prime_input_error : input_error {
    explicit prime_input_error(const std::string& what = "input is a probable prime") : input_error(what) {}
};

// A work bound was exhausted before the computation closed.
struct step_cap_exceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A floating cross-check failed beyond its tolerance.
struct precision_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace sqif
