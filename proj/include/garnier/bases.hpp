#ifndef GARNIER_BASES_HPP
#define GARNIER_BASES_HPP

#include <complex>

#include "garnier/errors.hpp"

namespace garnier {

using cplx = std::complex<double>;

/// The pair of elliptic bases (p, q), both strictly inside the unit disc.
struct Bases {
    cplx p;
    cplx q;

    Bases(cplx p_, cplx q_) : p(p_), q(q_) { validate(); }

    void validate() const {
        if (p == cplx(0.0) || q == cplx(0.0))
            throw domain_error("Bases: p and q must be nonzero");
        if (!(std::abs(p) < 1.0) || !(std::abs(q) < 1.0))
            throw domain_error("Bases: need |p| < 1 and |q| < 1");
    }
};

} // namespace garnier

#endif
