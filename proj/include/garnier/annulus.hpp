#ifndef GARNIER_ANNULUS_HPP
#define GARNIER_ANNULUS_HPP

#include <span>
#include <vector>

#include "garnier/bases.hpp"

namespace garnier {

// Zeros of theta-like functions are only defined mod p^Z; the canonical
// representative lives in the fundamental annulus A = { |p| < |z| <= 1 }.

/// Representative of z mod p^Z inside A.
cplx canonical_annulus(cplx z, cplx p);

/// Relative distance between the p^Z classes of a and b (0 when a = b p^j).
double mod_p_distance(cplx a, cplx b, cplx p);

/// Max-over-pairs mod-p distance under the best matching of the two multisets.
/// Returns +inf when sizes differ.  Sizes are expected to be small (<= 8).
double multiset_distance_mod_p(std::span<const cplx> a, std::span<const cplx> b, cplx p);

} // namespace garnier

#endif
