#ifndef LONGWAVE_ERRORS_HPP
#define LONGWAVE_ERRORS_HPP

#include <stdexcept>

namespace longwave {

class BlowUpError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DepthError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class EllipticError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace longwave

#endif  // LONGWAVE_ERRORS_HPP
