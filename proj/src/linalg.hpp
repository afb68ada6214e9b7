// Internal Eigen helpers shared by theta_space and pade. Not installed.
#ifndef GARNIER_SRC_LINALG_HPP
#define GARNIER_SRC_LINALG_HPP

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace garnier::detail {

struct KernelResult {
    std::vector<std::complex<double>> vec; // unit-norm kernel vector
    double sigma_min_rel = 0.0;            // smallest structural singular value / largest
    double gap = 0.0;                      // sigma_min over the numeric floor
    double sigma_extra_rel = 0.0;          // only when rows >= cols: smallest sv / largest
};

// Kernel of an r x c homogeneous system. For r = c-1 the kernel is structural
// (the last right-singular direction); for r >= c the smallest singular value
// must itself be numerically zero for a kernel to exist.
inline KernelResult svd_kernel(const Eigen::MatrixXcd& m) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const int r = int(m.rows()), c = int(m.cols());
    const double s1 = sv(0);
    KernelResult out;
    const double floor_sv = std::max(s1, 1.0) * 2.3e-16;
    if (r >= c) {
        // overdetermined: kernel direction is the smallest-singular-value one
        out.sigma_extra_rel = sv(c - 1) / std::max(s1, 1e-300);
        out.sigma_min_rel = (c >= 2) ? sv(c - 2) / std::max(s1, 1e-300) : 1.0;
        out.gap = ((c >= 2) ? sv(c - 2) : s1) / std::max(sv(c - 1), floor_sv);
    } else {
        // r = c-1: structural one-dimensional kernel
        out.sigma_min_rel = sv(r - 1) / std::max(s1, 1e-300);
        out.gap = sv(r - 1) / floor_sv;
    }
    const Eigen::VectorXcd v = svd.matrixV().col(c - 1);
    out.vec.assign(v.data(), v.data() + c);
    return out;
}

} // namespace garnier::detail

#endif
