#include "garnier/model.hpp"

#include <cmath>

#include "garnier/theta.hpp"

namespace garnier {

namespace {

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

double rel_dev(cplx a, cplx b) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

} // namespace

void PadeParams::validate(const ToleranceConfig& tol) const {
    bases.validate();
    if (N < 2)
        throw domain_error("PadeParams: N must be >= 2");
    if (m < 0 || n < 0)
        throw domain_error("PadeParams: m, n must be nonnegative");
    if (int(u.size()) != 2 * N)
        throw domain_error("PadeParams: need exactly 2N parameters u");
    if (k == cplx(0.0))
        throw domain_error("PadeParams: k must be nonzero");
    cplx prod(1.0);
    for (const cplx& ui : u) {
        if (ui == cplx(0.0))
            throw domain_error("PadeParams: u_i must be nonzero");
        prod *= ui;
    }
    if (rel_dev(prod, ipow(k, N)) > 1e-12)
        throw domain_error("PadeParams: constraint prod u_i = k^N violated");
    (void)tol;
}

void GarnierParams::validate(const ToleranceConfig& tol) const {
    bases.validate();
    if (N < 3)
        throw domain_error("GarnierParams: N must be >= 3");
    if (int(a.size()) != N + 1 || int(b.size()) != N + 1)
        throw domain_error("GarnierParams: need N+1 parameters a and b");
    if (k == cplx(0.0) || ell == cplx(0.0))
        throw domain_error("GarnierParams: k and ell must be nonzero");
    cplx prod(1.0);
    for (const cplx& ai : a) {
        if (ai == cplx(0.0))
            throw domain_error("GarnierParams: a_i must be nonzero");
        prod *= ai;
    }
    for (const cplx& bi : b) {
        if (bi == cplx(0.0))
            throw domain_error("GarnierParams: b_i must be nonzero");
        prod *= bi;
    }
    if (rel_dev(k * k * ell * ell, bases.q * prod) > 1e-10)
        throw domain_error("GarnierParams: constraint k^2 ell^2 = q prod a_i b_i violated");
    (void)tol;
}

void GarnierState::validate(const GarnierParams& params, const ToleranceConfig& tol) const {
    if (int(lambda.size()) != params.N - 2 || int(xi.size()) != params.N - 1)
        throw domain_error("GarnierState: expected N-2 lambda and N-1 xi entries");
    if (C == cplx(0.0))
        throw domain_error("GarnierState: C must be nonzero");
    cplx prod(1.0);
    for (const cplx& x : xi) {
        if (x == cplx(0.0))
            throw domain_error("GarnierState: xi_i must be nonzero");
        prod *= x;
    }
    for (const cplx& l : lambda)
        if (l == cplx(0.0))
            throw domain_error("GarnierState: lambda_i must be nonzero");
    if (rel_dev(prod, params.ell) > 1e-12)
        throw domain_error("GarnierState: constraint prod xi_i = ell violated");
    (void)tol;
}

PadeParams shift_T(const PadeParams& params, ShiftDirection dir) {
    PadeParams out = params;
    const cplx q = params.bases.q;
    if (dir == ShiftDirection::forward) {
        out.k = params.k / q;
        for (int i = params.N; i < 2 * params.N; ++i)
            out.u[std::size_t(i)] /= q;
    } else {
        out.k = params.k * q;
        for (int i = params.N; i < 2 * params.N; ++i)
            out.u[std::size_t(i)] *= q;
    }
    return out;
}

GarnierParams shift_T(const GarnierParams& params, ShiftDirection dir) {
    GarnierParams out = params;
    const cplx q = params.bases.q;
    if (dir == ShiftDirection::forward) {
        out.k = params.k / q;
        out.ell = params.ell * q;
    } else {
        out.k = params.k * q;
        out.ell = params.ell / q;
    }
    return out;
}

cplx psi(cplx z, const PadeParams& params, const ToleranceConfig& tol) {
    cplx acc(1.0);
    for (std::size_t i = 0; i < params.u.size(); ++i) {
        const cplx ui = params.u[i];
        try {
            acc *= elliptic_gamma(ui / z, params.bases, tol) /
                   elliptic_gamma(params.k / (ui * z), params.bases, tol);
        } catch (const pole_error& e) {
            throw pole_error("psi: factor " + std::to_string(i + 1) + ": " + e.what(), e.where,
                             int(i + 1), -1);
        }
    }
    return acc;
}

cplx mu1(cplx z, const PadeParams& params, const ToleranceConfig& tol) {
    const cplx p = params.bases.p;
    cplx acc(1.0);
    for (const cplx& ui : params.u) {
        const cplx den = theta(params.k / (ui * z), p, tol);
        if (den == cplx(0.0))
            throw pole_error("mu1: denominator theta vanishes", params.k / (ui * z));
        acc *= theta(ui / z, p, tol) / den;
    }
    return acc;
}

cplx mu2(cplx z, const PadeParams& params, const ToleranceConfig& tol) {
    const cplx p = params.bases.p;
    cplx acc(1.0);
    for (int i = 0; i < params.N; ++i) {
        const cplx uN = params.u[std::size_t(params.N + i)];
        const cplx den = theta(params.k / (uN * z), p, tol);
        if (den == cplx(0.0))
            throw pole_error("mu2: denominator theta vanishes", params.k / (uN * z));
        acc *= theta(params.u[std::size_t(i)] / z, p, tol) / den;
    }
    return acc;
}

cplx mu3(cplx z, const PadeParams& params, const ToleranceConfig& tol) {
    const cplx p = params.bases.p;
    const cplx q = params.bases.q;
    cplx acc(1.0);
    for (int i = 0; i < params.N; ++i) {
        const cplx den = theta(params.u[std::size_t(params.N + i)] / (q * z), p, tol);
        if (den == cplx(0.0))
            throw pole_error("mu3: denominator theta vanishes",
                             params.u[std::size_t(params.N + i)] / (q * z));
        acc *= theta(params.k / (q * params.u[std::size_t(i)] * z), p, tol) / den;
    }
    return acc;
}

GarnierParams pade_to_generic(const PadeParams& params, const ToleranceConfig& tol) {
    params.validate(tol);
    if (params.N < 3)
        throw unsupported_error("pade_to_generic: needs N >= 3");
    const cplx q = params.bases.q;
    GarnierParams out{params.bases, params.k, cplx(0.0), {}, {}, params.N};
    out.a.reserve(std::size_t(params.N + 1));
    out.a.push_back(params.u[0] * ipow(q, params.m));
    out.a.push_back(params.u[1] * ipow(q, -params.n));
    for (int i = 2; i < params.N; ++i)
        out.a.push_back(params.u[std::size_t(i)]);
    out.a.push_back(q);
    out.b.reserve(std::size_t(params.N + 1));
    for (int i = params.N; i < 2 * params.N; ++i)
        out.b.push_back(params.k / params.u[std::size_t(i)]);
    out.b.push_back(ipow(q, -(params.m + params.n)));

    cplx pu(1.0);
    for (int i = 0; i < params.N; ++i)
        pu *= params.u[std::size_t(i)];
    out.ell = pu / (params.k * ipow(q, params.n - 1));

    cplx prod(1.0);
    for (const cplx& x : out.a)
        prod *= x;
    for (const cplx& x : out.b)
        prod *= x;
    if (rel_dev(out.k * out.k * out.ell * out.ell, q * prod) > 1e-10)
        throw domain_error("pade_to_generic: induced parameters break k^2 ell^2 = q prod ab");
    return out;
}

cplx A_eval(cplx z, const GarnierParams& params, const ToleranceConfig& tol) {
    cplx acc(1.0);
    for (const cplx& ai : params.a)
        acc *= theta(z / ai, params.bases.p, tol);
    return acc;
}

cplx B_eval(cplx z, const GarnierParams& params, const ToleranceConfig& tol) {
    cplx acc(1.0);
    for (const cplx& bi : params.b)
        acc *= theta(z / bi, params.bases.p, tol);
    return acc;
}

cplx U_eval(cplx z, const GarnierParams& params, const ToleranceConfig& tol) {
    return A_eval(z, params, tol) * B_eval(z, params, tol);
}

cplx F_eval(cplx z, const GarnierState& state, const GarnierParams& params,
            const ToleranceConfig& tol) {
    const cplx p = params.bases.p;
    cplx acc = state.C * z;
    for (const cplx& l : state.lambda)
        acc *= theta(z / l, p, tol) * theta(params.k / (z * l), p, tol);
    return acc;
}

cplx G_eval(cplx z, const GarnierState& state, const Bases& bases, const ToleranceConfig& tol) {
    cplx acc = z;
    for (const cplx& x : state.xi)
        acc *= theta(z / x, bases.p, tol);
    return acc;
}

PadeParams desk_pade_params(int N, int m, int n, std::uint64_t seed) {
    if (N < 2)
        throw domain_error("desk_pade_params: N must be >= 2");
    // splitmix64: stable across platforms, unlike distribution adapters
    std::uint64_t s = seed + 0x9e3779b97f4a7c15ULL;
    auto next_u01 = [&s]() {
        std::uint64_t x = (s += 0x9e3779b97f4a7c15ULL);
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        x = x ^ (x >> 31);
        return double(x >> 11) * 0x1.0p-53;
    };
    PadeParams params{Bases(cplx(0.10), cplx(0.23)), cplx(1.7), {}, N, m, n};
    params.u.resize(std::size_t(2 * N));
    cplx prod(1.0);
    for (int i = 0; i + 1 < 2 * N; ++i) {
        const double mod = std::exp(std::log(0.5) + next_u01() * std::log(4.0));
        const double arg = 2.0 * M_PI * next_u01();
        params.u[std::size_t(i)] = std::polar(mod, arg);
        prod *= params.u[std::size_t(i)];
    }
    params.u.back() = ipow(params.k, N) / prod;
    params.validate();
    return params;
}

} // namespace garnier
