#pragma once

#include <stdexcept>
#include <string>

namespace nustab {

/// Malformed or out-of-range input (bad vertex, missing arc, unparsable file).
struct input_error : std::runtime_error {
    explicit input_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Instance exceeds a documented size cap of the chosen algorithm.
struct capacity_error : std::runtime_error {
    explicit capacity_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Contraction precondition violated (butterfly, bidirected, star).
struct contract_error : std::runtime_error {
    explicit contract_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Reduction precondition violated (wrong degree or entry pattern).
struct reduce_error : std::runtime_error {
    explicit reduce_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Schur complement requested on a singular pivot block.
struct singular_pivot_error : std::runtime_error {
    explicit singular_pivot_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// A certified internal invariant failed; indicates a bug or a genuine
/// counterexample to an assumed theorem. Never raised on valid inputs in
/// normal operation.
struct internal_error : std::logic_error {
    explicit internal_error(const std::string& msg) : std::logic_error(msg) {}
};

} // namespace nustab
