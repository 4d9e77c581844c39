#ifndef MLR_ERRORS_HPP
#define MLR_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace mlr {

// Error classes map 1:1 onto CLI exit codes (see tools/mlradon.cpp).
struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

struct PreconditionError : std::runtime_error {
    explicit PreconditionError(const std::string& msg) : std::runtime_error(msg) {}
};

struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace mlr

#endif
