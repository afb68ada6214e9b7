#ifndef GARNIER_TOLERANCE_HPP
#define GARNIER_TOLERANCE_HPP

#include "garnier/errors.hpp"

namespace garnier {

/// Global numeric policy: series truncation, identity thresholds, root filtering.
struct ToleranceConfig {
    double series_eps = 1e-16;          // truncate products/sums below this relative size
    double residual_tol = 1e-9;         // identity-check / refinement threshold
    double annulus_inner_margin = 1e-9; // fuzz when filtering roots to the fundamental annulus
    int max_terms = 512;                // hard cap on any truncated index

    void validate() const {
        if (!(series_eps > 0.0 && series_eps < residual_tol && residual_tol < 1.0))
            throw domain_error("ToleranceConfig: need 0 < series_eps < residual_tol < 1");
        if (max_terms < 64)
            throw domain_error("ToleranceConfig: max_terms must be >= 64");
        if (!(annulus_inner_margin > 0.0))
            throw domain_error("ToleranceConfig: annulus_inner_margin must be positive");
    }
};

inline const ToleranceConfig& default_tol() {
    static const ToleranceConfig cfg{};
    return cfg;
}

} // namespace garnier

#endif
