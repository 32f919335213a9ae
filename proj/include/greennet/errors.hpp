#pragma once

#include <stdexcept>
#include <string>

namespace greennet {

// Invalid argument to a numeric operation (non-finite input, violated precondition).
struct invalid_input : std::runtime_error {
    explicit invalid_input(const std::string& what) : std::runtime_error(what) {}
};

// Malformed text in a scenario/traffic file.
struct parse_error : std::runtime_error {
    explicit parse_error(const std::string& what) : std::runtime_error(what) {}
};

// Row count of a field file does not match the grid.
struct length_mismatch : std::runtime_error {
    explicit length_mismatch(const std::string& what) : std::runtime_error(what) {}
};

// Negative density in a field that must be nonnegative.
struct negative_value : std::runtime_error {
    explicit negative_value(const std::string& what) : std::runtime_error(what) {}
};

// JS divergence requested for a field with zero total mass.
struct undefined_divergence : std::runtime_error {
    explicit undefined_divergence(const std::string& what) : std::runtime_error(what) {}
};

// Training hit a non-finite loss; carries the epoch for diagnostics.
struct training_abort : std::runtime_error {
    int epoch;
    training_abort(int epoch_, const std::string& what)
        : std::runtime_error(what), epoch(epoch_) {}
};

}  // namespace greennet
