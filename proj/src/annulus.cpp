#include "garnier/annulus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace garnier {

cplx canonical_annulus(cplx z, cplx p) {
    if (z == cplx(0.0))
        throw domain_error("canonical_annulus: z must be nonzero");
    const double lp = std::log(std::abs(p)); // < 0
    const double t = std::log(std::abs(z)) / (-lp);
    // want |z p^j| in (|p|, 1]: j = ceil(t) up to boundary fuzz
    long j = std::lround(std::ceil(t - 1e-12));
    cplx w = z * std::pow(p, cplx(double(j)));
    // guard against rounding at the boundaries
    while (std::abs(w) > 1.0 + 1e-12)
        w *= p;
    while (std::abs(w) <= std::abs(p) * (1.0 + 1e-12))
        w /= p;
    return w;
}

double mod_p_distance(cplx a, cplx b, cplx p) {
    const cplx ca = canonical_annulus(a, p);
    const cplx cb = canonical_annulus(b, p);
    double best = std::numeric_limits<double>::infinity();
    // representatives can straddle the annulus boundary; check adjacent shifts
    for (int j = -1; j <= 1; ++j) {
        const cplx bj = cb * std::pow(p, cplx(double(j)));
        const double scale = std::max(std::abs(ca), std::abs(bj));
        best = std::min(best, std::abs(ca - bj) / scale);
    }
    return best;
}

double multiset_distance_mod_p(std::span<const cplx> a, std::span<const cplx> b, cplx p) {
    if (a.size() != b.size())
        return std::numeric_limits<double>::infinity();
    const std::size_t n = a.size();
    if (n == 0)
        return 0.0;
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    do {
        double worst = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            worst = std::max(worst, mod_p_distance(a[i], b[perm[i]], p));
        best = std::min(best, worst);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

} // namespace garnier
