#ifndef GARNIER_MODEL_HPP
#define GARNIER_MODEL_HPP

#include <cstdint>
#include <vector>

#include "garnier/bases.hpp"
#include "garnier/tolerance.hpp"

namespace garnier {

/// Interpolation-side parameter set: k and u_1..u_{2N} with prod u_i = k^N,
/// plus the interpolant orders (m, n).
struct PadeParams {
    Bases bases;
    cplx k;
    std::vector<cplx> u; // size 2N
    int N = 3;
    int m = 1;
    int n = 1;

    void validate(const ToleranceConfig& tol = default_tol()) const;
};

/// Lax-side parameter set: k, ell and a_1..a_{N+1}, b_1..b_{N+1} with
/// k^2 ell^2 = q prod a_i b_i.
struct GarnierParams {
    Bases bases;
    cplx k;
    cplx ell;
    std::vector<cplx> a; // size N+1
    std::vector<cplx> b; // size N+1
    int N = 3;

    void validate(const ToleranceConfig& tol = default_tol()) const;
};

/// Dynamical variables of the flow. The xi representatives are stored so that
/// prod xi_i = ell holds exactly; lambda_i pair with k/lambda_i inside F.
struct GarnierState {
    std::vector<cplx> lambda; // size N-2
    std::vector<cplx> xi;     // size N-1
    cplx C{1.0};

    void validate(const GarnierParams& params, const ToleranceConfig& tol = default_tol()) const;
};

enum class ShiftDirection { forward, backward };

/// Parameter shift T: k -> k/q, u_i -> u_i (i <= N), u_i/q (i > N).
PadeParams shift_T(const PadeParams& params, ShiftDirection dir);

/// Parameter shift T on the Lax side: k -> k/q, ell -> q ell, a and b fixed.
GarnierParams shift_T(const GarnierParams& params, ShiftDirection dir);

/// Interpolation weight psi(z) = prod_i Gamma(u_i/z) / Gamma(k/(u_i z)).
cplx psi(cplx z, const PadeParams& params, const ToleranceConfig& tol = default_tol());

/// mu_1 = psi(z/q)/psi(z);  mu_2 = psibar(z/q)/psi(z);  mu_3 = psibar(z)/psi(z);
/// all evaluated through their p-periodic theta-product forms.
cplx mu1(cplx z, const PadeParams& params, const ToleranceConfig& tol = default_tol());
cplx mu2(cplx z, const PadeParams& params, const ToleranceConfig& tol = default_tol());
cplx mu3(cplx z, const PadeParams& params, const ToleranceConfig& tol = default_tol());

/// Lax-side parameters induced by a Pade parameter set:
///   a = {u_1 q^m, u_2 q^-n, u_3..u_N, q},  b = {k/u_{N+1}..k/u_{2N}, q^{-m-n}},
/// ell = prod_{i<=N} u_i / (k q^{n-1}).  The k^2 ell^2 = q prod ab constraint
/// is re-checked numerically.
GarnierParams pade_to_generic(const PadeParams& params, const ToleranceConfig& tol = default_tol());

cplx A_eval(cplx z, const GarnierParams& params, const ToleranceConfig& tol = default_tol());
cplx B_eval(cplx z, const GarnierParams& params, const ToleranceConfig& tol = default_tol());
cplx U_eval(cplx z, const GarnierParams& params, const ToleranceConfig& tol = default_tol());

/// F(z) = C z prod_i [z/lambda_i][k/(z lambda_i)] with the current k of params.
cplx F_eval(cplx z, const GarnierState& state, const GarnierParams& params,
            const ToleranceConfig& tol = default_tol());

/// G(z) = z prod_i [z/xi_i] (unit prefactor; the section-4 normalization).
cplx G_eval(cplx z, const GarnierState& state, const Bases& bases,
            const ToleranceConfig& tol = default_tol());

/// Seeded desk parameter generator: p = 0.10, q = 0.23, k = 1.7, moduli of u
/// log-uniform in [1/2, 2] with the last one fixing prod u = k^N.
PadeParams desk_pade_params(int N, int m, int n, std::uint64_t seed);

} // namespace garnier

#endif
