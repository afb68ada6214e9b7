#include "garnier/theta_space.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "garnier/annulus.hpp"
#include "garnier/theta.hpp"
#include "linalg.hpp"

namespace garnier {

namespace {

// integer power of a complex number
cplx ipow(cplx b, long e) {
    if (e < 0)
        return 1.0 / ipow(b, -e);
    cplx acc(1.0), x = b;
    while (e) {
        if (e & 1)
            acc *= x;
        x *= x;
        e >>= 1;
    }
    return acc;
}

// (p; p)_infty
cplx pochhammer_p(cplx p, const ToleranceConfig& tol) {
    cplx acc(1.0), pi = p;
    for (int i = 0; i < tol.max_terms; ++i) {
        acc *= (1.0 - pi);
        pi *= p;
        if (std::abs(pi) < tol.series_eps * 0.25)
            return acc;
    }
    throw error("pochhammer_p: no convergence");
}

// deterministic well-separated sample points: golden-angle spiral over two radii
std::vector<cplx> sample_ring(std::size_t count, double r0, double r1) {
    constexpr double golden = 0.6180339887498949;
    std::vector<cplx> pts(count);
    double phase = 0.37; // fixed offset, avoids the real axis
    for (std::size_t s = 0; s < count; ++s) {
        phase += golden;
        phase -= std::floor(phase);
        const double rho = (s % 2 == 0) ? r0 : r1;
        pts[s] = std::polar(rho, 2.0 * M_PI * phase);
    }
    return pts;
}

} // namespace

ThetaFourier::ThetaFourier(Multiplier mult, std::vector<cplx> seeds, const Bases& bases)
    : mult_(mult), seeds_(std::move(seeds)), bases_(bases) {
    if (mult_.degree < 1)
        throw domain_error("ThetaFourier: degree must be >= 1");
    if (mult_.alpha == cplx(0.0))
        throw domain_error("ThetaFourier: alpha must be nonzero");
    if (int(seeds_.size()) != mult_.degree)
        throw domain_error("ThetaFourier: need exactly `degree` seed coefficients");
}

bool ThetaFourier::is_zero() const {
    for (const cplx& t : seeds_)
        if (t != cplx(0.0))
            return false;
    return true;
}

cplx ThetaFourier::coefficient(long n) const {
    const long D = mult_.degree;
    long j = n >= 0 ? n / D : -((-n + D - 1) / D);
    long r = n - j * D; // in [0, D)
    // t_{r+jD} = t_r p^{jr + D j(j-1)/2} alpha^{-j}
    return seeds_[std::size_t(r)] * ipow(bases_.p, j * r + D * j * (j - 1) / 2) *
           ipow(mult_.alpha, -j);
}

ThetaFourier::EvalData ThetaFourier::evaluate_full(cplx z, const ToleranceConfig& tol) const {
    if (z == cplx(0.0))
        throw domain_error("ThetaFourier::evaluate: z must be nonzero");
    const long D = mult_.degree;
    const cplx p = bases_.p;
    const cplx zD = ipow(z, D);
    const cplx pD = ipow(p, D);

    cplx value(0.0), deriv(0.0);
    double scale = 0.0;
    const int jcap = 200;
    for (long r = 0; r < D; ++r) {
        if (seeds_[std::size_t(r)] == cplx(0.0))
            continue;
        const cplx t0 = seeds_[std::size_t(r)] * ipow(z, r);
        // sweep both lattice directions; |ratio| shrinks by |p|^D each step, so
        // once |ratio| < 1/2 the tail is bounded by the next |term|
        for (int dir : {+1, -1}) {
            cplx term, ratio;
            long n;
            if (dir > 0) {
                term = t0;
                n = r;
                ratio = ipow(p, r) / mult_.alpha * zD; // T_{j+1}/T_j at j = 0
            } else {
                term = t0 * mult_.alpha * ipow(p, D - r) / zD; // T_{-1}
                n = r - D;
                ratio = mult_.alpha * ipow(p, 2 * D - r) / zD; // T_{j-1}/T_j at j = -1
            }
            double local_max = 0.0;
            int j = 0;
            for (; j < jcap; ++j) {
                value += term;
                deriv += double(n) * term / z;
                const double a = std::abs(term);
                scale += a;
                local_max = std::max(local_max, a);
                term *= ratio;
                if (std::abs(term) < tol.series_eps * local_max && std::abs(ratio) < 0.5)
                    break;
                ratio *= pD;
                n += dir * D;
            }
            if (j == jcap)
                throw error("ThetaFourier::evaluate: lattice sum did not converge");
        }
    }
    return {value, deriv, scale};
}

cplx ThetaFourier::evaluate(cplx z, const ToleranceConfig& tol) const {
    return evaluate_full(z, tol).value;
}

ThetaFourier from_zeros(std::span<const cplx> zs, cplx scale, int extra_z_power,
                        const Bases& bases, const ToleranceConfig& tol) {
    if (zs.empty())
        throw domain_error("from_zeros: need at least one zero");
    for (const cplx& c : zs)
        if (c == cplx(0.0))
            throw domain_error("from_zeros: zeros must be nonzero");
    if (scale == cplx(0.0))
        throw domain_error("from_zeros: scale must be nonzero");

    const cplx p = bases.p;
    const int D = int(zs.size());

    // triple product: theta(x) = (p;p)^{-1} sum_n (-1)^n p^{n(n-1)/2} x^n;
    // convolve the per-factor windows (coefficients of [z/c] in z).
    const double cut = tol.series_eps * 1e-2;
    std::map<long, cplx> acc{{0, cplx(1.0)}};
    for (const cplx& c : zs) {
        std::vector<std::pair<long, cplx>> fac;
        double fmax = 0.0;
        for (int dir : {+1, -1}) {
            for (long n = (dir > 0 ? 0 : -1);; n += dir) {
                const cplx a = ((n % 2) ? -1.0 : 1.0) * ipow(p, n * (n - 1) / 2) * ipow(c, -n);
                const double aa = std::abs(a);
                fmax = std::max(fmax, aa);
                if (aa < cut * fmax && std::labs(n) >= 2)
                    break;
                fac.emplace_back(n, a);
                if (std::labs(n) > 64)
                    throw error("from_zeros: factor expansion window overflow");
            }
        }
        std::map<long, cplx> next;
        for (const auto& [n1, a1] : acc)
            for (const auto& [n2, a2] : fac)
                next[n1 + n2] += a1 * a2;
        acc.swap(next);
    }

    const cplx norm = scale / ipow(pochhammer_p(p, tol), D);
    cplx zero_prod(1.0);
    for (const cplx& c : zs)
        zero_prod *= c;
    const cplx alpha = ipow(p, extra_z_power) * (D % 2 ? -1.0 : 1.0) * zero_prod;

    std::vector<cplx> seeds(std::size_t(D), cplx(0.0));
    for (int r = 0; r < D; ++r) {
        const long n = long(r) - extra_z_power; // f_n = scale * g_{n - e}
        auto it = acc.find(n);
        if (it != acc.end())
            seeds[std::size_t(r)] = norm * it->second;
    }
    return ThetaFourier({D, alpha}, std::move(seeds), bases);
}

std::vector<ThetaFourier> symmetric_subspace(const Multiplier& mult,
                                             const std::optional<SymmetrySpec>& sym,
                                             const Bases& bases, const ToleranceConfig& tol) {
    const int D = mult.degree;
    std::vector<ThetaFourier> unit;
    unit.reserve(std::size_t(D));
    for (int r = 0; r < D; ++r) {
        std::vector<cplx> seeds(std::size_t(D), cplx(0.0));
        seeds[std::size_t(r)] = 1.0;
        unit.emplace_back(mult, std::move(seeds), bases);
    }
    if (!sym)
        return unit;

    // the twist and the multiplier must induce one consistent functional
    // equation: alpha^2 = (h/p)^D p^{2t}
    const cplx want = ipow(sym->h / bases.p, D) * ipow(bases.p, 2 * sym->twist_degree);
    if (std::abs(mult.alpha * mult.alpha / want - 1.0) > 1e-8)
        throw domain_error("symmetric_subspace: multiplier and symmetry are inconsistent");

    const auto pts = sample_ring(std::size_t(2 * D), 0.7, 0.95);
    Eigen::MatrixXcd m(long(pts.size()), D);
    for (std::size_t s = 0; s < pts.size(); ++s) {
        const cplx z = pts[s];
        const cplx w = sym->h / z;
        const cplx tw = ipow(sym->h / (z * z), sym->twist_degree);
        double rscale = 0.0;
        for (int r = 0; r < D; ++r) {
            const cplx ew = unit[std::size_t(r)].evaluate(w, tol);
            const cplx ez = unit[std::size_t(r)].evaluate(z, tol);
            m(long(s), r) = ew - tw * ez;
            rscale = std::max(rscale, std::abs(ew) + std::abs(tw * ez));
        }
        // normalize by the evaluation magnitude, not the difference: rows that
        // are satisfied identically must stay numerically tiny
        if (rscale > 0)
            m.row(long(s)) /= rscale;
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    int dim = 0;
    for (int i = D - 1; i >= 0; --i) {
        if (sv(i) > 1e-8)
            break;
        ++dim;
    }
    if (dim == 0)
        throw domain_error("symmetric_subspace: empty symmetric subspace");
    std::vector<ThetaFourier> basis;
    basis.reserve(std::size_t(dim));
    for (int i = 0; i < dim; ++i) {
        const Eigen::VectorXcd v = svd.matrixV().col(D - 1 - i);
        std::vector<cplx> seeds(v.data(), v.data() + D);
        basis.emplace_back(mult, std::move(seeds), bases);
    }
    return basis;
}

ThetaFourier combine(std::span<const ThetaFourier> basis, std::span<const cplx> coeffs) {
    if (basis.empty() || basis.size() != coeffs.size())
        throw domain_error("combine: size mismatch");
    const int D = basis[0].multiplier().degree;
    std::vector<cplx> seeds(std::size_t(D), cplx(0.0));
    for (std::size_t i = 0; i < basis.size(); ++i) {
        if (basis[i].multiplier().degree != D)
            throw domain_error("combine: mixed multipliers");
        for (int r = 0; r < D; ++r)
            seeds[std::size_t(r)] += coeffs[i] * basis[i].seeds()[std::size_t(r)];
    }
    return ThetaFourier(basis[0].multiplier(), std::move(seeds), basis[0].bases());
}

ThetaFourier fit_values(std::span<const ThetaFourier> basis, std::span<const cplx> points,
                        std::span<const cplx> values, FitDiagnostics* diag,
                        const ToleranceConfig& tol) {
    if (basis.empty())
        throw domain_error("fit_values: empty basis");
    if (points.size() != values.size() || points.size() < basis.size())
        throw domain_error("fit_values: need at least dim(basis) matched points/values");
    const long rows = long(points.size()), cols = long(basis.size());
    Eigen::MatrixXcd m(rows, cols);
    Eigen::VectorXcd rhs(rows);
    for (long i = 0; i < rows; ++i) {
        for (long r = 0; r < cols; ++r)
            m(i, r) = basis[std::size_t(r)].evaluate(points[std::size_t(i)], tol);
        rhs(i) = values[std::size_t(i)];
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double cond = sv(0) / std::max(sv(cols - 1), 1e-300);
    if (cond > 1e12)
        throw ill_conditioned_error("fit_values: condition number beyond 1e12", cond);
    Eigen::VectorXcd c;
    if (rows == cols)
        c = m.colPivHouseholderQr().solve(rhs);
    else
        c = svd.solve(rhs);
    const double residual = (m * c - rhs).norm() / std::max(rhs.norm(), 1e-300);
    if (diag) {
        diag->condition = cond;
        diag->residual = residual;
    }
    std::vector<cplx> coeffs(c.data(), c.data() + cols);
    return combine(basis, coeffs);
}

ThetaFourier ratio_kernel(std::span<const ThetaFourier> basis, std::span<const RatioPair> pairs,
                          KernelDiagnostics* diag, const ToleranceConfig& tol) {
    if (basis.empty())
        throw domain_error("ratio_kernel: empty basis");
    if (pairs.size() + 1 < basis.size())
        throw domain_error("ratio_kernel: need at least dim(basis)-1 pairs");
    const long rows = long(pairs.size()), cols = long(basis.size());
    Eigen::MatrixXcd m(rows, cols);
    for (long i = 0; i < rows; ++i) {
        const auto& pr = pairs[std::size_t(i)];
        for (long r = 0; r < cols; ++r)
            m(i, r) = basis[std::size_t(r)].evaluate(pr.zprime, tol) -
                      pr.r * basis[std::size_t(r)].evaluate(pr.z, tol);
        const double rn = m.row(i).norm();
        if (rn > 0)
            m.row(i) /= rn;
    }
    auto kr = detail::svd_kernel(m);
    if (diag) {
        diag->gap = kr.gap;
        diag->sigma_min_rel = kr.sigma_min_rel;
    }
    if (kr.sigma_min_rel < 1e-6)
        throw degenerate_error("ratio_kernel: kernel dimension > 1 within singular-value "
                               "threshold 1e-6",
                               kr.gap);
    if (rows >= cols && kr.sigma_extra_rel > 1e-8)
        throw degenerate_error("ratio_kernel: overdetermined system has no kernel", kr.gap);

    // normalize: largest coefficient exactly 1
    std::size_t imax = 0;
    for (std::size_t i = 1; i < kr.vec.size(); ++i)
        if (std::abs(kr.vec[i]) > std::abs(kr.vec[imax]))
            imax = i;
    const cplx pivot = kr.vec[imax];
    std::vector<cplx> coeffs(kr.vec.size());
    for (std::size_t i = 0; i < kr.vec.size(); ++i)
        coeffs[i] = kr.vec[i] / pivot;
    return combine(basis, coeffs);
}

std::vector<cplx> zeros(const ThetaFourier& f, const ToleranceConfig& tol) {
    if (f.is_zero())
        throw domain_error("zeros: function is identically zero");
    const cplx p = f.bases().p;
    const double ap = std::abs(p);
    const int D = f.multiplier().degree;

    // windowed Laurent coefficients weighted by the max of |z^n| on the annulus
    const long jspan = 40;
    std::vector<std::pair<long, double>> weights;
    double wmax = 0.0;
    std::map<long, cplx> coef;
    for (long n = -jspan; n <= jspan + D; ++n) {
        const cplx t = f.coefficient(n);
        coef[n] = t;
        const double w = std::abs(t) * (n >= 0 ? 1.0 : std::pow(ap, double(n)));
        weights.emplace_back(n, w);
        wmax = std::max(wmax, w);
    }
    const double keep = 1e-9 * wmax; // companion guesses only; Newton does the real work
    long lo = 0, hi = 0;
    bool first = true;
    for (const auto& [n, w] : weights) {
        if (w >= keep) {
            if (first) {
                lo = hi = n;
                first = false;
            } else {
                lo = std::min(lo, n);
                hi = std::max(hi, n);
            }
        }
    }
    if (first)
        throw extraction_error("zeros: empty coefficient window");

    const long deg = hi - lo;
    if (deg < 1)
        throw extraction_error("zeros: degenerate coefficient window");
    // companion matrix of the monic polynomial sum c_i w^i, c_i = t_{lo+i}
    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(deg, deg);
    const cplx lead = coef[hi];
    for (long i = 0; i < deg; ++i) {
        comp(i, deg - 1) = -coef[lo + i] / lead;
        if (i > 0)
            comp(i, i - 1) = 1.0;
    }
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
    if (es.info() != Eigen::Success)
        throw extraction_error("zeros: companion eigensolver failed");

    // Newton on the full series from each in-annulus guess
    std::vector<cplx> found;
    const double margin = tol.annulus_inner_margin;
    for (long i = 0; i < deg; ++i) {
        cplx z = es.eigenvalues()(i);
        const double az = std::abs(z);
        if (!(az > ap * (1.0 - margin) && az <= 1.0 + margin) || az == 0.0)
            continue;
        bool converged = false;
        for (int it = 0; it < 50; ++it) {
            const auto ed = f.evaluate_full(z, tol);
            if (std::abs(ed.value) <= 1e-14 * ed.scale) {
                converged = true;
                break;
            }
            if (ed.derivative == cplx(0.0))
                break;
            cplx step = ed.value / ed.derivative;
            if (std::abs(step) > 0.5 * std::abs(z))
                step *= 0.5 * std::abs(z) / std::abs(step);
            // damp until the residual actually shrinks
            cplx znew = z - step;
            for (int d = 0; d < 8; ++d) {
                if (std::abs(f.evaluate(znew, tol)) <= std::abs(ed.value))
                    break;
                step *= 0.5;
                znew = z - step;
            }
            if (znew == z) {
                converged = std::abs(ed.value) <= tol.residual_tol * ed.scale;
                break;
            }
            z = znew;
        }
        if (!converged) {
            const auto ed = f.evaluate_full(z, tol);
            converged = std::abs(ed.value) <= tol.residual_tol * ed.scale;
        }
        if (!converged)
            continue;
        const cplx zc = canonical_annulus(z, p);
        bool dup = false;
        for (const cplx& w : found)
            if (mod_p_distance(zc, w, p) < 1e-7)
                dup = true;
        if (!dup)
            found.push_back(zc);
    }
    if (int(found.size()) != D)
        throw extraction_error("zeros: found " + std::to_string(found.size()) +
                               " annulus zeros, expected " + std::to_string(D) +
                               " (close zero pair or multiplicity?)");
    std::sort(found.begin(), found.end(), [](cplx a, cplx b) {
        const double ra = std::arg(a), rb = std::arg(b);
        if (ra != rb)
            return ra < rb;
        return std::abs(a) < std::abs(b);
    });
    return found;
}

} // namespace garnier
