#ifndef GARNIER_ERRORS_HPP
#define GARNIER_ERRORS_HPP

#include <complex>
#include <stdexcept>
#include <string>

namespace garnier {

// Base class for all library errors.
class error : public std::runtime_error {
public:
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

// Argument outside the defining domain (z = 0, |p| >= 1, bad sizes, ...).
class domain_error : public error {
public:
    explicit domain_error(const std::string& msg) : error(msg) {}
};

// Evaluation hit (or came within tolerance of) a pole of an infinite product.
class pole_error : public error {
public:
    pole_error(const std::string& msg, std::complex<double> where, int i = -1, int j = -1)
        : error(msg), where(where), index_i(i), index_j(j) {}
    std::complex<double> where;
    int index_i, index_j; // product indices of the offending factor, -1 if n/a
};

// Homogeneous solve whose kernel is not one-dimensional within tolerance.
class degenerate_error : public error {
public:
    degenerate_error(const std::string& msg, double gap) : error(msg), gap(gap) {}
    double gap; // smallest kept singular value over the numeric floor
};

// Linear system condition number beyond the configured limit.
class ill_conditioned_error : public error {
public:
    ill_conditioned_error(const std::string& msg, double condition)
        : error(msg), condition(condition) {}
    double condition;
};

// Zero extraction / pairing failed structurally (wrong count, unpaired zero).
class extraction_error : public error {
public:
    explicit extraction_error(const std::string& msg) : error(msg) {}
};

// Operation outside supported scope (non-terminating series, N != 3 checks).
class unsupported_error : public error {
public:
    explicit unsupported_error(const std::string& msg) : error(msg) {}
};

} // namespace garnier

#endif
