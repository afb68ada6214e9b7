#include "garnier/theta.hpp"

#include <cmath>
#include <cstdio>

namespace garnier {

namespace {

constexpr double pole_hit_eps = 1e-13; // |1 - x| below this counts as a pole/zero hit

std::string cplx_str(cplx z) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "(%.6g,%.6g)", z.real(), z.imag());
    return buf;
}

} // namespace

cplx theta(cplx z, cplx p, const ToleranceConfig& tol) {
    if (z == cplx(0.0))
        throw domain_error("theta: z must be nonzero");
    if (!(std::abs(p) < 1.0) || p == cplx(0.0))
        throw domain_error("theta: need 0 < |p| < 1");

    const double az = std::abs(z);
    const double big = std::max(az, 1.0 / az);
    const cplx zinv = 1.0 / z;

    cplx acc(1.0);
    cplx pi(1.0); // p^i
    for (int i = 0; i < tol.max_terms; ++i) {
        acc *= (1.0 - z * pi) * (1.0 - zinv * pi * p);
        pi *= p;
        // both remaining factor deviations are bounded by |p|^{i+1} * big
        if (std::abs(pi) * big < tol.series_eps * 0.25)
            return acc;
    }
    throw error("theta: product did not converge within max_terms");
}

cplx elliptic_gamma(cplx z, const Bases& bases, const ToleranceConfig& tol) {
    if (z == cplx(0.0))
        throw domain_error("elliptic_gamma: z must be nonzero");

    const cplx p = bases.p, q = bases.q;
    const double az = std::abs(z);
    const double big = std::max(az, 1.0 / az);
    // log-sum branch avoids over/underflow of long partial products at extreme |z|
    const bool log_branch = (az > 1e3 || az < 1e-3);
    const cplx zinv = 1.0 / z;

    cplx acc(1.0);
    cplx log_acc(0.0);
    cplx pi(1.0); // p^i
    for (int i = 0; i < tol.max_terms; ++i) {
        if (std::abs(pi) * big < tol.series_eps * 0.25)
            break;
        cplx qj(1.0); // q^j
        bool inner_converged = false;
        for (int j = 0; j < tol.max_terms; ++j) {
            const cplx den = 1.0 - z * pi * qj;
            if (std::abs(den) < pole_hit_eps)
                throw pole_error("elliptic_gamma: pole of the double product at z=" + cplx_str(z),
                                 z, i, j);
            const cplx num = 1.0 - zinv * pi * p * qj * q;
            if (log_branch)
                log_acc += std::log(num) - std::log(den);
            else
                acc *= num / den;
            qj *= q;
            if (std::abs(pi * qj) * big < tol.series_eps * 0.25) {
                inner_converged = true;
                break;
            }
        }
        if (!inner_converged)
            throw error("elliptic_gamma: inner product did not converge within max_terms");
        pi *= p;
    }
    return log_branch ? std::exp(log_acc) : acc;
}

cplx theta_shifted(cplx z, int s, const Bases& bases, const ToleranceConfig& tol) {
    const cplx q = bases.q;
    if (s >= 0) {
        cplx acc(1.0);
        cplx x = z;
        for (int i = 0; i < s; ++i) {
            acc *= theta(x, bases.p, tol);
            x *= q;
        }
        return acc;
    }
    cplx acc(1.0);
    cplx x = z;
    for (int i = 1; i <= -s; ++i) {
        x /= q;
        const cplx t = theta(x, bases.p, tol);
        if (std::abs(t) < pole_hit_eps)
            throw pole_error("theta_shifted: pole at z=" + cplx_str(z) + " s=" + std::to_string(s),
                             x);
        acc *= t;
    }
    return 1.0 / acc;
}

cplx theta_multi(std::span<const cplx> xs, int s, const Bases& bases, const ToleranceConfig& tol) {
    cplx acc(1.0);
    for (const cplx& x : xs)
        acc *= theta_shifted(x, s, bases, tol);
    return acc;
}

cplx v_series(cplx a0, std::span<const cplx> a, cplx z, const Bases& bases,
              const ToleranceConfig& tol) {
    const cplx q = bases.q;

    // find the termination order: smallest M >= 0 with a_i q^M = 1 for some i
    const double term_eps = 1e-10;
    int M = -1;
    const int m_cap = 4 * tol.max_terms;
    for (const cplx& ai : a) {
        cplx x = ai;
        for (int m = 0; m <= m_cap; ++m) {
            if (std::abs(x - 1.0) <= term_eps) {
                if (M < 0 || m < M)
                    M = m;
                break;
            }
            if (std::abs(x) < 0.9)
                break; // |a_i q^m| only shrinks further: no hit possible
            x *= q;
        }
    }
    if (M < 0)
        throw unsupported_error("v_series: no terminating parameter a_i = q^{-M} found");

    if (z == cplx(0.0))
        return cplx(1.0);

    const cplx th_a0 = theta(a0, bases.p, tol);
    if (std::abs(th_a0) < pole_hit_eps)
        throw pole_error("v_series: [a0] vanishes", a0);

    // running products [a_i]_s and [q a0/a_i]_s, updated by one theta factor per s
    const std::size_t n = a.size();
    std::vector<cplx> num_run(n, cplx(1.0)), den_run(n, cplx(1.0));
    std::vector<cplx> num_arg(n), den_arg(n);
    for (std::size_t i = 0; i < n; ++i) {
        num_arg[i] = a[i];
        den_arg[i] = q * a0 / a[i];
    }
    cplx num0_run(1.0), den0_run(1.0); // the i = 0 factor [a0]_s / [q]_s
    cplx num0_arg = a0, den0_arg = q;

    cplx sum(0.0);
    cplx zs(1.0);     // z^s
    cplx q2s(1.0);    // q^{2s}
    double max_abs_term = 0.0;
    cplx last_term(0.0);
    for (int s = 0; s <= M + 1; ++s) {
        cplx term = theta(a0 * q2s, bases.p, tol) / th_a0 * zs * num0_run / den0_run;
        for (std::size_t i = 0; i < n; ++i) {
            if (std::abs(den_run[i]) < pole_hit_eps * std::abs(num_run[i]))
                throw pole_error("v_series: [q a0/a_i]_s vanished", den_arg[i], int(i), s);
            term *= num_run[i] / den_run[i];
        }
        if (s <= M)
            sum += term;
        else
            last_term = term;
        max_abs_term = std::max(max_abs_term, std::abs(term));

        // advance the running factorials to order s+1
        num0_run *= theta(num0_arg, bases.p, tol);
        den0_run *= theta(den0_arg, bases.p, tol);
        num0_arg *= q;
        den0_arg *= q;
        for (std::size_t i = 0; i < n; ++i) {
            num_run[i] *= theta(num_arg[i], bases.p, tol);
            den_run[i] *= theta(den_arg[i], bases.p, tol);
            num_arg[i] *= q;
            den_arg[i] *= q;
        }
        zs *= z;
        q2s *= q * q;
    }
    if (std::abs(last_term) > tol.residual_tol * std::max(max_abs_term, 1.0))
        std::fprintf(stderr, "garnier: v_series termination residue %.3e exceeds tolerance\n",
                     std::abs(last_term) / std::max(max_abs_term, 1.0));
    return sum;
}

} // namespace garnier
