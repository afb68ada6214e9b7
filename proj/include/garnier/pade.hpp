#ifndef GARNIER_PADE_HPP
#define GARNIER_PADE_HPP

#include <utility>
#include <vector>

#include "garnier/model.hpp"

namespace garnier {

/// The printed psi_j denominator [u1/z, q u1/z, ...]_j breaks the k/q-symmetry
/// that the interpolation problem demands; `corrected` uses [u1/z, q u1 z/k, ...]_j,
/// which the symmetry oracle selects. `printed` is kept for comparison only.
enum class PsiBasisVariant { corrected, printed };

/// Numerator basis for P: psi_j(z) = [u1, q u1/k, k/(u3 z), q z/u3]_j / (denominator)_j.
cplx basis_psi_j(cplx z, int j, const PadeParams& params,
                 PsiBasisVariant variant = PsiBasisVariant::corrected,
                 const ToleranceConfig& tol = default_tol());

/// Numerator basis for Q: phi_j(z) as printed (already k/q-symmetric).
cplx basis_phi_j(cplx z, int j, const PadeParams& params,
                 const ToleranceConfig& tol = default_tol());

/// Interpolant pair P, Q in the psi_j / phi_j bases. Coefficients are jointly
/// normalized: first coefficient of (p_coeffs | q_coeffs) above noise is 1.
struct PadeSolution {
    PadeParams params;
    PsiBasisVariant variant = PsiBasisVariant::corrected;
    std::vector<cplx> p_coeffs; // size m+1
    std::vector<cplx> q_coeffs; // size n+1
    double condition = 0.0;
    double kernel_gap = 0.0;
    double max_node_residual = 0.0; // relative residual of P - psi Q at the nodes

    cplx P(cplx z, const ToleranceConfig& tol = default_tol()) const;
    cplx Q(cplx z, const ToleranceConfig& tol = default_tol()) const;
};

/// Null-space route: solve P(q^-s) - psi(q^-s) Q(q^-s) = 0, s = 0..m+n.
PadeSolution solve_interpolation(const PadeParams& params,
                                 PsiBasisVariant variant = PsiBasisVariant::corrected,
                                 const ToleranceConfig& tol = default_tol());

/// Moment-determinant route: cofactor expansion of the explicit determinant
/// formulas, with moments evaluated as terminating elliptic hypergeometric sums.
PadeSolution moment_interpolants(const PadeParams& params,
                                 PsiBasisVariant variant = PsiBasisVariant::corrected,
                                 const ToleranceConfig& tol = default_tol());

/// Casorati determinants of the interpolants at the current and T-shifted
/// parameters, together with the structural denominators of their elliptic
/// forms. All evaluators are pure.
class CasoratiData {
public:
    CasoratiData(PadeSolution sol, PadeSolution sol_shifted,
                 const ToleranceConfig& tol = default_tol());

    const PadeSolution& sol() const { return sol_; }
    const PadeSolution& sol_shifted() const { return sol_shifted_; }

    cplx D1(cplx z, const ToleranceConfig& tol = default_tol()) const;
    cplx D2(cplx z, const ToleranceConfig& tol = default_tol()) const;
    cplx D3(cplx z, const ToleranceConfig& tol = default_tol()) const;

    // D_i / psi as theta-only expressions (no elliptic gamma), with scale:
    // |result.second| is the magnitude of the largest term, for residual tests
    std::pair<cplx, double> X1(cplx z, const ToleranceConfig& tol = default_tol()) const;
    std::pair<cplx, double> X2(cplx z, const ToleranceConfig& tol = default_tol()) const;
    std::pair<cplx, double> X3(cplx z, const ToleranceConfig& tol = default_tol()) const;

    cplx X1den(cplx z, const ToleranceConfig& tol = default_tol()) const;
    cplx X2den(cplx z, const ToleranceConfig& tol = default_tol()) const;
    cplx X3den(cplx z, const ToleranceConfig& tol = default_tol()) const;

    /// F(z) = X1(z) X1den(z) / ([z, k/z]_{m+n} [k/z^2])  (Casorati route)
    cplx F_sampled(cplx z, const ToleranceConfig& tol = default_tol()) const;
    /// G(z) = X2(z) X2den(z) / ([z]_{m+n} [k/qz]_{m+n+1})
    cplx G_sampled(cplx z, const ToleranceConfig& tol = default_tol()) const;
    /// F at the shifted parameters, from the Casorati determinant of the
    /// shifted solution with itself.
    cplx Fbar_sampled(cplx z, const ToleranceConfig& tol = default_tol()) const;

private:
    PadeSolution sol_;
    PadeSolution sol_shifted_;
};

/// Solve at params and T(params) and bundle the determinants.
CasoratiData casorati(const PadeParams& params, const PadeSolution& sol,
                      const ToleranceConfig& tol = default_tol());

/// Scale bookkeeping of the extraction: the lemma-normalized F carries C_lemma,
/// the lemma-normalized G carries Cprime_lemma (both relative to the stored
/// zero representatives); state.C holds the Lax-normalized scale
/// q^{-m} C_lemma / Cprime_lemma.
struct ExtractionScales {
    cplx C_lemma{1.0};
    cplx Cprime_lemma{1.0};
    double f_fit_residual = 0.0;
    double g_fit_residual = 0.0;
};

/// Extract (lambda_i, xi_i, C) from the Casorati data: sample F and G on a
/// circle, fit the corresponding theta spaces, take zeros, pair lambda with
/// k/lambda, and adjust xi representatives so that prod xi = ell exactly.
std::pair<GarnierState, ExtractionScales> extract_state(const PadeParams& params,
                                                        const CasoratiData& cas,
                                                        const ToleranceConfig& tol = default_tol());

enum class LaxEquation { L2, L3 };
enum class SolutionBranch { P, psiQ };

/// Gauged contiguous relations evaluated on the interpolation data. The
/// z-independent renormalizations of F and Fbar are fitted once at a reference
/// point; their predicted values (q^-m and the shifted-parameter theta product)
/// are exposed for cross-checks.
class LaxContext {
public:
    LaxContext(const PadeParams& params, const CasoratiData& cas, const GarnierState& state,
               const ExtractionScales& scales, const ToleranceConfig& tol = default_tol());

    /// Left-hand side of L2 or L3 at z, divided by the largest of its terms.
    cplx residual(cplx z, LaxEquation which, SolutionBranch branch,
                  const ToleranceConfig& tol = default_tol()) const;

    cplx fitted_c2() const { return c2_; }
    cplx fitted_c3() const { return c3_; }
    cplx predicted_c2() const { return pred_c2_; }
    cplx predicted_c3() const { return pred_c3_; }

private:
    cplx term_sum(cplx z, LaxEquation which, SolutionBranch branch, cplx c2, cplx c3,
                  double* scale, const ToleranceConfig& tol) const;

    PadeParams params_;
    CasoratiData cas_;
    GarnierState state_;
    ExtractionScales scales_;
    GarnierParams generic_;
    cplx c2_{1.0}, c3_{1.0};
    cplx pred_c2_{1.0}, pred_c3_{1.0};
};

/// One-call form of the residual; builds the context each time.
cplx lax_residual(cplx z, const PadeParams& params, const CasoratiData& cas,
                  const GarnierState& state, const ExtractionScales& scales, LaxEquation which,
                  SolutionBranch branch, const ToleranceConfig& tol = default_tol());

/// Deterministic sample circle |z| = |k|^{1/4} used by the extraction.
std::vector<cplx> extraction_samples(const PadeParams& params, std::size_t count);

} // namespace garnier

#endif
