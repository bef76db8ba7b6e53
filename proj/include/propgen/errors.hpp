#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace propgen {

/// Base type for everything thrown by this library.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Rejected input: malformed identifiers, duplicate or clashing names,
/// nullary connectives, empty atom sets, out-of-contract call arguments.
class config_error : public error {
public:
    using error::error;
};

/// The requested space is provably empty because the atoms cannot fit:
/// a formula of depth n contains at most k^n distinct atoms, where k is
/// the maximum arity of the signature.
class infeasible_error : public error {
public:
    using error::error;
};

/// The requested space is empty for a reason other than the k^n bound,
/// e.g. positive depth over an empty signature, or all-zero weights.
class empty_space_error : public error {
public:
    using error::error;
};

/// An enumeration would exceed its configured size cap.
class capacity_error : public error {
public:
    using error::error;
};

/// Formula text rejected by parse_prefix. position() is a 0-based byte
/// offset into the input.
class parse_error : public error {
public:
    enum class Kind { syntax, arity_mismatch, undeclared_symbol };

    parse_error(Kind kind, std::size_t position, const std::string& message)
        : error(message + " (at offset " + std::to_string(position) + ")"),
          kind_(kind),
          position_(position) {}

    Kind kind() const noexcept { return kind_; }
    std::size_t position() const noexcept { return position_; }

private:
    Kind kind_;
    std::size_t position_;
};

} // namespace propgen
