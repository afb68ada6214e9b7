#ifndef GARNIER_THETA_SPACE_HPP
#define GARNIER_THETA_SPACE_HPP

#include <optional>
#include <span>
#include <vector>

#include "garnier/bases.hpp"
#include "garnier/tolerance.hpp"

namespace garnier {

/// Quasi-periodicity data of a theta-like entire function: f(pz) = alpha z^{-degree} f(z).
struct Multiplier {
    int degree = 1;
    cplx alpha{1.0};
};

/// Twisted inversion symmetry f(h/z) = (h/z^2)^twist_degree f(z).
/// twist_degree = 0 is plain h-symmetry; twist_degree = 1 is the symmetry
/// satisfied by products of the form z * prod_i [z/w_i][h/(z w_i)].
struct SymmetrySpec {
    cplx h{1.0};
    int twist_degree = 0;
};

/// Entire function with a prescribed multiplier, stored as the seed Laurent
/// coefficients t_0..t_{D-1}; the full lattice is forced by
///   t_{n+D} = (p^n / alpha) t_n.
class ThetaFourier {
public:
    ThetaFourier(Multiplier mult, std::vector<cplx> seeds, const Bases& bases);

    const Multiplier& multiplier() const { return mult_; }
    const std::vector<cplx>& seeds() const { return seeds_; }
    const Bases& bases() const { return bases_; }
    bool is_zero() const;

    cplx evaluate(cplx z, const ToleranceConfig& tol = default_tol()) const;

    struct EvalData {
        cplx value;
        cplx derivative;
        double scale; // sum of |term|: local magnitude reference for residuals
    };
    EvalData evaluate_full(cplx z, const ToleranceConfig& tol = default_tol()) const;

    /// Lattice coefficient t_n for arbitrary n (n = r + j*degree).
    cplx coefficient(long n) const;

private:
    Multiplier mult_;
    std::vector<cplx> seeds_;
    Bases bases_;
};

/// scale * z^extra_z_power * prod_i theta(z / zeros[i]), represented on the
/// Fourier lattice by convolving the triple-product expansions of the factors.
ThetaFourier from_zeros(std::span<const cplx> zeros, cplx scale, int extra_z_power,
                        const Bases& bases, const ToleranceConfig& tol = default_tol());

/// Basis (orthonormal seed vectors) of the space cut out by the multiplier and,
/// when present, the twisted symmetry. Without symmetry this is the full
/// unconstrained space of dimension `degree`.
std::vector<ThetaFourier> symmetric_subspace(const Multiplier& mult,
                                             const std::optional<SymmetrySpec>& sym,
                                             const Bases& bases,
                                             const ToleranceConfig& tol = default_tol());

struct FitDiagnostics {
    double condition = 0.0;
    double residual = 0.0; // relative to the value scale
};

/// Element of span(basis) matching the given values (least squares when
/// overdetermined, direct solve in the exact-dimension case).
ThetaFourier fit_values(std::span<const ThetaFourier> basis, std::span<const cplx> points,
                        std::span<const cplx> values, FitDiagnostics* diag = nullptr,
                        const ToleranceConfig& tol = default_tol());

/// Homogeneous condition f(zprime) = r * f(z).
struct RatioPair {
    cplx z;
    cplx zprime;
    cplx r;
};

struct KernelDiagnostics {
    double gap = 0.0;           // smallest kept singular value over the numeric floor
    double sigma_min_rel = 0.0; // smallest kept singular value relative to the largest
};

/// One-dimensional kernel of the homogeneous system given by the ratio pairs,
/// normalized so the largest seed coefficient equals 1.
ThetaFourier ratio_kernel(std::span<const ThetaFourier> basis, std::span<const RatioPair> pairs,
                          KernelDiagnostics* diag = nullptr,
                          const ToleranceConfig& tol = default_tol());

/// The `degree` zeros in the fundamental annulus { |p| < |z| <= 1 }, counted
/// with multiplicity: Laurent window -> companion-matrix roots -> Newton
/// refinement on the full series -> canonical representatives.
std::vector<cplx> zeros(const ThetaFourier& f, const ToleranceConfig& tol = default_tol());

/// sum_r coeffs[r] * basis[r]; all elements must share one multiplier.
ThetaFourier combine(std::span<const ThetaFourier> basis, std::span<const cplx> coeffs);

} // namespace garnier

#endif
