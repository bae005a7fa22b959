#ifndef TREECF_ERRORS_HPP
#define TREECF_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace treecf {

// Error taxonomy mirrors the CLI exit codes: DataError -> 3, SchemaError -> 4,
// ConfigError -> 2. Anything else is a plain bug.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Bad or inconsistent input data (files, rows, labels).
struct DataError : Error {
    using Error::Error;
};

/// Model/report file violates its documented format or is incompatible.
struct SchemaError : Error {
    using Error::Error;
};

/// Invalid parameter combination.
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace treecf

#endif  // TREECF_ERRORS_HPP
