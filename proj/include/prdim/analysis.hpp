#pragma once

#include <vector>

#include "prdim/types.hpp"

namespace prdim {

// Scalar functionals of the stimulus- and unit-side kernels that drive the
// leading-order bias and variance of the uncentered estimators. Plug-in
// values from a large reference matrix treated as the population.
struct KernelMoments {
    double c = 0.0;        // <<k(x,y)^2>_x^2>_y / <k(x,y)^2>^2        (>= 1)
    double c_prime = 0.0;  // <k(x,y)^2 k(x,x)> / (<k(x,y)^2><k(x,x)>)
    double c_tilde = 0.0;
    double c_tilde_prime = 0.0;
    double psi = 0.0;        // <k(x,x)>^2 / <k(x,x)^2>, in (0, 1]
    double psi_tilde = 0.0;
    double gamma_pop = 0.0;  // uncentered population dimensionality
};

struct BiasVariance {
    double bias = 0.0;
    double variance = 0.0;
};

struct ManifoldShare {
    double kappa = 0.0;  // squared share of total variance
    double gamma = 0.0;  // per-manifold dimensionality
};

// Joint-dimensionality decomposition over a set of manifolds sharing the
// stimulus axis. gamma_align / gamma_ortho are the perfectly aligned and
// orthogonal limits of the joint dimensionality; exd measures how far the
// joint value sits above the aligned limit.
struct AlignmentReport {
    std::vector<ManifoldShare> per_manifold;
    double gamma_joint = 0.0;
    double gamma_align = 0.0;
    double gamma_ortho = 0.0;
    double exd = 0.0;
    Matrix cka_matrix;             // uncentered kernel-trace cosine, diagonal 1
    double weighted_mean_cka = 0.0;
    // residual of the inverse-dimensionality decomposition identity
    // (exact for the uncentered naive estimator; diagnostic otherwise)
    double decomposition_residual = 0.0;
};

KernelMoments estimate_kernel_moments(const SampleMatrix& phi_ref);

// Leading-order predicted bias and variance of gamma at sample size (P, Q).
// `correction` selects naive or both; other corrections are not covered by
// the closed forms.
BiasVariance predict_bias_variance(const KernelMoments& m, Index p, Index q,
                                   Correction correction);

// Defaults to the uncentered naive estimator, under which the kappa/CKA
// decomposition of 1/gamma_joint is an exact identity. Other variants are
// supported but the identity becomes approximate; the report carries the
// residual either way.
AlignmentReport alignment_report(const std::vector<SampleMatrix>& manifolds,
                                 const EstimatorVariant& variant = {Correction::naive,
                                                                    Centering::none});

}  // namespace prdim
