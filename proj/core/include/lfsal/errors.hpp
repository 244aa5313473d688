#pragma once

#include <stdexcept>
#include <string>

namespace lfsal {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Shape or extent mismatch anywhere in the toolkit.
struct DimensionError : Error {
    using Error::Error;
};

// Non-finite value produced where the contract requires finite math.
struct NumericError : Error {
    using Error::Error;
};

// Undecodable or malformed file content (PNG, checkpoint, config).
struct FormatError : Error {
    using Error::Error;
};

// Dataset entries that cannot be paired by id.
struct PairingError : Error {
    using Error::Error;
};

}  // namespace lfsal
