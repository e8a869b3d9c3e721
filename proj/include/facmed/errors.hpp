#ifndef FACMED_ERRORS_HPP
#define FACMED_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace facmed {

/// Raised for malformed documents, invalid parameters and inconsistent inputs.
class validation_error : public std::runtime_error {
public:
    explicit validation_error(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when a mechanism is applied to a metric of the wrong shape
/// (e.g. a percentile mechanism on a non-path tree).
class shape_error : public std::runtime_error {
public:
    explicit shape_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace facmed

#endif
