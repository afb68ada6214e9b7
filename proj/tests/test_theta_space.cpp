#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "garnier/annulus.hpp"
#include "garnier/theta.hpp"
#include "garnier/theta_space.hpp"

using namespace garnier;

namespace {

double rel_err(cplx a, cplx b) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

std::mt19937_64 rng(777);
double uni(double lo, double hi) {
    return lo + double(rng() >> 11) * 0x1.0p-53 * (hi - lo);
}
cplx rand_on(double rlo, double rhi) {
    return std::polar(std::exp(uni(std::log(rlo), std::log(rhi))), uni(0.0, 2.0 * M_PI));
}

const Bases desk{cplx(0.1), cplx(0.23)};

} // namespace

TEST_CASE("canonical_annulus and mod_p distance") {
    const cplx p(0.1);
    const cplx z(0.57, 0.31);
    CHECK(rel_err(canonical_annulus(z, p), z) == 0.0);
    CHECK(rel_err(canonical_annulus(z * p * p * p, p), z) < 1e-14);
    CHECK(rel_err(canonical_annulus(z / (p * p), p), z) < 1e-14);
    CHECK(mod_p_distance(z, z * p * p, p) < 1e-14);
    CHECK(mod_p_distance(z, z * 1.05, p) > 1e-3);
    const std::vector<cplx> a{z, 2.0 * z}, b{2.0 * z * p, z / p};
    CHECK(multiset_distance_mod_p(a, b, p) < 1e-14);
}

TEST_CASE("from_zeros: single factor matches theta directly") {
    const cplx c(0.8, 0.35);
    const auto f = from_zeros(std::vector<cplx>{c}, cplx(1.0), 0, desk);
    CHECK(f.multiplier().degree == 1);
    CHECK(rel_err(f.multiplier().alpha, -c) < 1e-15);
    CHECK(std::abs(f.evaluate(c)) < 1e-14);
    for (int t = 0; t < 20; ++t) {
        const cplx z = rand_on(0.3, 3.0);
        CHECK(rel_err(f.evaluate(z), theta(z / c, desk.p)) < 1e-12);
    }
}

TEST_CASE("from_zeros: product with z prefactor matches the direct product") {
    const std::vector<cplx> xi{cplx(0.8, 0.3), cplx(1.2, -0.5)};
    const auto g = from_zeros(xi, cplx(1.0), 1, desk);
    CHECK(g.multiplier().degree == 2);
    // alpha = p * xi1 * xi2 for z * [z/xi1][z/xi2]
    CHECK(rel_err(g.multiplier().alpha, desk.p * xi[0] * xi[1]) < 1e-14);
    for (int t = 0; t < 20; ++t) {
        const cplx z = rand_on(0.3, 3.0);
        const cplx direct = z * theta(z / xi[0], desk.p) * theta(z / xi[1], desk.p);
        CHECK(rel_err(g.evaluate(z), direct) < 1e-12);
    }
}

TEST_CASE("evaluate: multiplier equation holds on the lattice") {
    for (int t = 0; t < 10; ++t) {
        std::vector<cplx> zs;
        const int d = 1 + int(rng() % 5);
        for (int i = 0; i < d; ++i)
            zs.push_back(rand_on(0.4, 2.0));
        const auto f = from_zeros(zs, rand_on(0.5, 2.0), int(rng() % 3), desk);
        const auto& [D, alpha] = f.multiplier();
        for (int s = 0; s < 20; ++s) {
            const cplx z = rand_on(0.15, 0.95);
            const cplx lhs = f.evaluate(desk.p * z);
            const cplx rhs = alpha * std::pow(z, -double(D)) * f.evaluate(z);
            CHECK(rel_err(lhs, rhs) < 1e-11);
        }
    }
}

TEST_CASE("evaluate: zero seeds give the zero function") {
    ThetaFourier f({2, cplx(1.0)}, std::vector<cplx>{cplx(0.0), cplx(0.0)}, desk);
    CHECK(f.is_zero());
    CHECK(f.evaluate(cplx(0.7, 0.1)) == cplx(0.0));
}

TEST_CASE("symmetric_subspace: section-2 style space has dimension d+1") {
    // D = 2d with alpha = (h/p)^d and plain symmetry -> dimension d+1
    const cplx h(1.4, 0.3);
    for (int d = 1; d <= 3; ++d) {
        Multiplier mult{2 * d, std::pow(h / desk.p, double(d))};
        const auto basis = symmetric_subspace(mult, SymmetrySpec{h, 0}, desk);
        CHECK(int(basis.size()) == d + 1);
        for (const auto& e : basis) {
            for (int t = 0; t < 10; ++t) {
                const cplx z = rand_on(0.3, 1.5);
                CHECK(rel_err(e.evaluate(h / z), e.evaluate(z)) < 1e-10);
            }
        }
    }
}

TEST_CASE("symmetric_subspace: twisted F-type space has dimension N-1") {
    const cplx k(1.7, 0.0);
    for (int N : {3, 4, 5}) {
        const int D = 2 * N - 4;
        const cplx alpha = desk.p * std::pow(k / desk.p, double(N - 2));
        const auto basis = symmetric_subspace(Multiplier{D, alpha}, SymmetrySpec{k, 1}, desk);
        CHECK(int(basis.size()) == N - 1);
        for (const auto& e : basis) {
            for (int t = 0; t < 10; ++t) {
                const cplx z = rand_on(0.4, 1.4);
                const cplx lhs = e.evaluate(k / z);
                const cplx rhs = (k / (z * z)) * e.evaluate(z);
                CHECK(rel_err(lhs, rhs) < 1e-10);
            }
        }
    }
}

TEST_CASE("symmetric_subspace: unconstrained space has dimension D") {
    const cplx ell(0.9, 0.2);
    const int N = 4;
    const cplx alpha = ((N - 1) % 2 ? -1.0 : 1.0) * desk.p * ell;
    const auto basis = symmetric_subspace(Multiplier{N - 1, alpha}, std::nullopt, desk);
    CHECK(int(basis.size()) == N - 1);
}

TEST_CASE("symmetric_subspace: inconsistent pair rejected") {
    CHECK_THROWS_AS(symmetric_subspace(Multiplier{2, cplx(5.0, 1.0)},
                                       SymmetrySpec{cplx(1.4, 0.3), 0}, desk),
                    garnier::domain_error);
}

TEST_CASE("fit_values: projection property and zero fit") {
    const cplx k(1.7);
    const cplx alpha = desk.p * (k / desk.p);
    const auto basis = symmetric_subspace(Multiplier{2, alpha}, SymmetrySpec{k, 1}, desk);
    REQUIRE(basis.size() == 2);
    std::vector<cplx> coeffs{cplx(0.7, -0.3), cplx(-1.1, 0.45)};
    const auto target = combine(basis, coeffs);
    std::vector<cplx> pts, vals, zvals;
    for (int i = 0; i < 4; ++i) {
        pts.push_back(rand_on(0.5, 1.2));
        vals.push_back(target.evaluate(pts.back()));
        zvals.push_back(cplx(0.0));
    }
    FitDiagnostics diag;
    const auto fitted = fit_values(basis, pts, vals, &diag);
    for (std::size_t r = 0; r < 2; ++r)
        CHECK(std::abs(fitted.seeds()[r] - target.seeds()[r]) < 1e-10);
    CHECK(diag.residual < 1e-12);
    const auto zfit = fit_values(basis, pts, zvals);
    CHECK(std::abs(zfit.seeds()[0]) < 1e-14);
    CHECK(std::abs(zfit.seeds()[1]) < 1e-14);
    // held-out point
    const cplx z = rand_on(0.5, 1.2);
    CHECK(rel_err(fitted.evaluate(z), target.evaluate(z)) < 1e-8);
}

TEST_CASE("ratio_kernel: recovers a known function up to scale") {
    const cplx ell(0.8, 0.25);
    const std::vector<cplx> xi{cplx(0.9, 0.2), ell / cplx(0.9, 0.2)};
    const auto g = from_zeros(xi, cplx(1.0), 1, desk);
    const auto basis = symmetric_subspace(g.multiplier(), std::nullopt, desk);
    REQUIRE(basis.size() == 2);
    std::vector<RatioPair> pairs;
    const cplx z0 = rand_on(0.5, 1.3), z1 = rand_on(0.5, 1.3);
    pairs.push_back({z0, z1, g.evaluate(z1) / g.evaluate(z0)});
    KernelDiagnostics diag;
    const auto rec = ratio_kernel(basis, pairs, &diag);
    CHECK(diag.sigma_min_rel > 1e-6);
    // proportional seeds
    const cplx ratio = rec.seeds()[0] / g.seeds()[0];
    CHECK(rel_err(rec.seeds()[1], ratio * g.seeds()[1]) < 1e-10);
    // zeros agree mod p
    const auto zr = zeros(rec);
    CHECK(multiset_distance_mod_p(zr, xi, desk.p) < 1e-8);
}

TEST_CASE("ratio_kernel: inconsistent overdetermined pairs are degenerate") {
    const auto basis = symmetric_subspace(Multiplier{2, cplx(0.4, 0.1)}, std::nullopt, desk);
    std::vector<RatioPair> pairs;
    pairs.push_back({cplx(0.7, 0.1), cplx(0.9, -0.2), cplx(1.3, 0.4)});
    pairs.push_back({cplx(0.55, -0.3), cplx(1.05, 0.15), cplx(-0.7, 0.9)});
    CHECK_THROWS_AS(ratio_kernel(basis, pairs), garnier::degenerate_error);
}

TEST_CASE("zeros: single-factor and theta cases") {
    const cplx c(0.8, 0.35);
    const auto f = from_zeros(std::vector<cplx>{c}, cplx(1.0), 0, desk);
    const auto z1 = zeros(f);
    REQUIRE(z1.size() == 1);
    CHECK(mod_p_distance(z1[0], c, desk.p) < 1e-12);
    // theta(z) itself: D = 1, zero at z = 1
    const auto th = from_zeros(std::vector<cplx>{cplx(1.0)}, cplx(1.0), 0, desk);
    const auto zt = zeros(th);
    REQUIRE(zt.size() == 1);
    CHECK(std::abs(zt[0] - cplx(1.0)) < 1e-12);
}

TEST_CASE("zeros: round trip for random products up to degree 8") {
    for (int trial = 0; trial < 12; ++trial) {
        const int d = 2 + int(rng() % 7);
        std::vector<cplx> zs;
        for (int i = 0; i < d; ++i)
            zs.push_back(rand_on(0.3, 2.5));
        const auto f = from_zeros(zs, rand_on(0.5, 2.0), int(rng() % 2), desk);
        const auto found = zeros(f);
        REQUIRE(int(found.size()) == d);
        CHECK(multiset_distance_mod_p(found, zs, desk.p) < 1e-9);
    }
}

TEST_CASE("zeros: identically zero function rejected") {
    ThetaFourier f({2, cplx(1.0)}, std::vector<cplx>{cplx(0.0), cplx(0.0)}, desk);
    CHECK_THROWS_AS(zeros(f), garnier::domain_error);
}
