#pragma once

#include <Eigen/Core>

#include <cstddef>

namespace prdim {

// Pairwise (tree) summation. The t5 assembly subtracts nearly equal large
// sums, so the big reductions must not accumulate left-to-right.
template <class F>
double pairwise_sum(std::ptrdiff_t lo, std::ptrdiff_t hi, F&& term) {
    const std::ptrdiff_t n = hi - lo;
    if (n <= 32) {
        double acc = 0.0;
        for (std::ptrdiff_t i = lo; i < hi; ++i) acc += term(i);
        return acc;
    }
    const std::ptrdiff_t mid = lo + n / 2;
    return pairwise_sum(lo, mid, term) + pairwise_sum(mid, hi, term);
}

template <class F>
double pairwise_sum(std::ptrdiff_t n, F&& term) {
    return pairwise_sum<F>(0, n, static_cast<F&&>(term));
}

inline double pairwise_sum(const double* x, std::ptrdiff_t n) {
    return pairwise_sum(n, [x](std::ptrdiff_t i) { return x[i]; });
}

inline double pairwise_sum(const Eigen::VectorXd& v) {
    return pairwise_sum(v.data(), v.size());
}

inline double pairwise_dot(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    return pairwise_sum(x.size(), [&](std::ptrdiff_t i) { return x[i] * y[i]; });
}

}  // namespace prdim
