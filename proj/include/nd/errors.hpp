#pragma once

#include <stdexcept>
#include <string>

namespace nd {

// Error categories map onto CLI exit codes: usage = 2, data = 3, internal = 4.

// Caller passed something unusable: bad flag combination, mismatched widths,
// out-of-range parameters.
class UsageError : public std::runtime_error {
public:
    explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

// Input files or their contents are unusable: parse failures, degenerate
// datasets, unsupported model file versions.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// A library invariant was violated; indicates a bug, not a user mistake.
class InternalError : public std::logic_error {
public:
    explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace nd
