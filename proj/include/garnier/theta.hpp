#ifndef GARNIER_THETA_HPP
#define GARNIER_THETA_HPP

#include <span>
#include <vector>

#include "garnier/bases.hpp"
#include "garnier/tolerance.hpp"

namespace garnier {

/// Multiplicative theta function of base p:
///   theta(z, p) = prod_{i>=0} (1 - z p^i)(1 - z^{-1} p^{i+1}).
/// Zeros at z = p^n, n in Z.  Satisfies
///   theta(pz) = -z^{-1} theta(z),  theta(z) = -z theta(1/z),  theta(z) = theta(p/z).
cplx theta(cplx z, cplx p, const ToleranceConfig& tol = default_tol());

/// Elliptic gamma function:
///   egamma(z) = prod_{i,j>=0} (1 - z^{-1} p^{i+1} q^{j+1}) / (1 - z p^i q^j),
/// with egamma(qz) = theta(z, p) egamma(z) and egamma(z) egamma(pq/z) = 1.
/// Throws pole_error when z lands on a zero of a denominator factor.
cplx elliptic_gamma(cplx z, const Bases& bases, const ToleranceConfig& tol = default_tol());

/// Shifted theta factorial [z]_s = egamma(q^s z)/egamma(z), evaluated as the
/// finite theta product: prod_{i=0}^{s-1} theta(q^i z) for s >= 0 and
/// 1 / prod_{i=1}^{-s} theta(q^{-i} z) for s < 0.
cplx theta_shifted(cplx z, int s, const Bases& bases, const ToleranceConfig& tol = default_tol());

/// [x_1, ..., x_l]_s = [x_1]_s ... [x_l]_s.
cplx theta_multi(std::span<const cplx> xs, int s, const Bases& bases,
                 const ToleranceConfig& tol = default_tol());

/// Terminating elliptic hypergeometric series
///   sum_{s=0}^{M} theta(a0 q^{2s})/theta(a0) * prod_{i=0}^{n} [a_i]_s/[q a0/a_i]_s * z^s,
/// where the i = 0 factor of the product is [a0]_s/[q]_s and M is fixed by the
/// first list entry of the form a_i = q^{-M}.  Non-terminating input is rejected.
cplx v_series(cplx a0, std::span<const cplx> a, cplx z, const Bases& bases,
              const ToleranceConfig& tol = default_tol());

} // namespace garnier

#endif
