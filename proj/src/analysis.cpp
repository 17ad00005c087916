#include "prdim/analysis.hpp"

#include <cmath>

#include "prdim/estimator.hpp"
#include "prdim/summation.hpp"

namespace prdim {

namespace {

struct SideMoments {
    double c, c_prime, psi, gamma;
};

// Plug-in moments of the empirical kernel K = M M^T / n_feat.
SideMoments side_moments(const Matrix& m) {
    const Index p = m.rows();
    const double n = static_cast<double>(p);
    Matrix k(p, p);
    k.setZero();
    k.selfadjointView<Eigen::Lower>().rankUpdate(m);
    k.triangularView<Eigen::StrictlyUpper>() = k.transpose();
    k /= static_cast<double>(m.cols());

    const Vector diag = k.diagonal();
    const double kxx = pairwise_sum(diag) / n;
    const double kxx2 = pairwise_sum(p, [&](std::ptrdiff_t i) { return diag[i] * diag[i]; }) / n;
    if (kxx == 0.0) throw DegenerateKernel("kernel has zero mean diagonal");
    if (kxx2 == 0.0) throw DegenerateKernel("kernel has zero second diagonal moment");

    // column means of K.^2 drive c; the diagonal-weighted mean drives c'
    Vector col_mean_sq(p);
    for (Index j = 0; j < p; ++j) {
        const double* col = k.col(j).data();
        col_mean_sq[j] = pairwise_sum(p, [&](std::ptrdiff_t i) { return col[i] * col[i]; }) / n;
    }
    const double kxy2 = pairwise_sum(col_mean_sq) / n;
    if (kxy2 == 0.0) throw DegenerateKernel("kernel has zero off-diagonal second moment");
    const double num_c =
        pairwise_sum(p, [&](std::ptrdiff_t j) { return col_mean_sq[j] * col_mean_sq[j]; }) / n;
    const double num_cp = pairwise_sum(p, [&](std::ptrdiff_t j) {
                              const double* col = k.col(static_cast<Index>(j)).data();
                              return diag[j] *
                                     pairwise_sum(p, [&](std::ptrdiff_t i) {
                                         return col[i] * col[i];
                                     });
                          }) /
                          (n * n);

    SideMoments out;
    out.c = num_c / (kxy2 * kxy2);
    out.c_prime = num_cp / (kxy2 * kxx);
    out.psi = kxx * kxx / kxx2;
    out.gamma = kxx * kxx / kxy2;
    return out;
}

}  // namespace

KernelMoments estimate_kernel_moments(const SampleMatrix& phi_ref) {
    const SideMoments x = side_moments(phi_ref.values());
    const SideMoments w = side_moments(phi_ref.values().transpose());
    KernelMoments m;
    m.c = x.c;
    m.c_prime = x.c_prime;
    m.psi = x.psi;
    m.c_tilde = w.c;
    m.c_tilde_prime = w.c_prime;
    m.psi_tilde = w.psi;
    m.gamma_pop = x.gamma;
    return m;
}

BiasVariance predict_bias_variance(const KernelMoments& m, Index p, Index q,
                                   Correction correction) {
    if (correction != Correction::naive && correction != Correction::both) {
        throw PreconditionError("bias/variance prediction covers the naive and both estimators");
    }
    if (p < 1 || q < 1) throw PreconditionError("P and Q must be >= 1");
    const double g = m.gamma_pop;
    const double ip = 1.0 / static_cast<double>(p);
    const double iq = 1.0 / static_cast<double>(q);

    const double shared_bias = 4.0 * g * (ip * (m.c - m.c_prime) + iq * (m.c_tilde - m.c_tilde_prime));
    const double shared_var = 4.0 * g * g * ip * (1.0 / m.psi + m.c - 2.0 * m.c_prime) +
                              4.0 * g * g * iq * (1.0 / m.psi_tilde + m.c_tilde - 2.0 * m.c_tilde_prime);

    BiasVariance out;
    if (correction == Correction::both) {
        out.bias = shared_bias;
        out.variance = shared_var;
    } else {
        out.bias = shared_bias - g * (g - 1.0) * (ip / m.psi + iq / m.psi_tilde);
        out.variance = shared_var - 2.0 * g * (g - 1.0) * (ip + iq);
    }
    return out;
}

AlignmentReport alignment_report(const std::vector<SampleMatrix>& manifolds,
                                 const EstimatorVariant& variant) {
    const std::size_t n = manifolds.size();
    if (n < 2) throw PreconditionError("alignment needs at least 2 manifolds");
    const Index p = manifolds[0].rows();
    Index q_total = 0;
    for (const auto& m : manifolds) {
        if (m.rows() != p) throw RowCountMismatch("manifolds must share the row count");
        q_total += m.cols();
    }

    // unnormalized Grams; every kappa/CKA quantity reduces to their traces
    std::vector<Matrix> grams;
    grams.reserve(n);
    for (const auto& m : manifolds) {
        Matrix g(p, p);
        g.setZero();
        g.selfadjointView<Eigen::Lower>().rankUpdate(m.values());
        g.triangularView<Eigen::StrictlyUpper>() = g.transpose();
        grams.push_back(std::move(g));
    }

    Vector traces(static_cast<Index>(n));
    for (std::size_t i = 0; i < n; ++i) traces[static_cast<Index>(i)] = grams[i].trace();
    const double trace_total = traces.sum();
    if (trace_total == 0.0) throw DegenerateKernel("all manifolds have zero variance");

    Matrix cross(static_cast<Index>(n), static_cast<Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            const double t = grams[i].cwiseProduct(grams[j]).sum();
            cross(static_cast<Index>(i), static_cast<Index>(j)) = t;
            cross(static_cast<Index>(j), static_cast<Index>(i)) = t;
        }
    }

    AlignmentReport rep;
    rep.cka_matrix.resize(static_cast<Index>(n), static_cast<Index>(n));
    for (Index i = 0; i < static_cast<Index>(n); ++i) {
        for (Index j = 0; j < static_cast<Index>(n); ++j) {
            rep.cka_matrix(i, j) = cross(i, j) / std::sqrt(cross(i, i) * cross(j, j));
        }
    }

    // per-manifold dimensionality and the joint estimate on the
    // column-concatenation, all through the requested estimator
    Matrix concat(p, q_total);
    Index offset = 0;
    for (const auto& m : manifolds) {
        concat.middleCols(offset, m.cols()) = m.values();
        offset += m.cols();
    }
    const DimEstimate joint = estimate_dimensionality(SampleMatrix(std::move(concat)), variant);
    if (!joint.valid) {
        throw NumericalError("joint dimensionality estimate is invalid: " + joint.diagnostics);
    }
    rep.gamma_joint = joint.value;

    rep.per_manifold.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double kappa_root = traces[static_cast<Index>(i)] / trace_total;
        rep.per_manifold[i].kappa = kappa_root * kappa_root;
        const DimEstimate gi = estimate_dimensionality(manifolds[i], variant);
        if (!gi.valid) {
            throw NumericalError("per-manifold estimate is invalid: " + gi.diagnostics);
        }
        rep.per_manifold[i].gamma = gi.value;
    }

    double inv_ortho = 0.0;
    double align_root = 0.0;
    for (const auto& share : rep.per_manifold) {
        inv_ortho += share.kappa / share.gamma;
        align_root += std::sqrt(share.kappa / share.gamma);
    }
    rep.gamma_ortho = 1.0 / inv_ortho;
    rep.gamma_align = 1.0 / (align_root * align_root);
    rep.exd = (rep.gamma_joint - rep.gamma_align) / rep.gamma_joint;

    double cross_sum = 0.0;
    double weight_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const double w = std::sqrt(rep.per_manifold[i].kappa * rep.per_manifold[j].kappa /
                                       (rep.per_manifold[i].gamma * rep.per_manifold[j].gamma));
            cross_sum += w * rep.cka_matrix(static_cast<Index>(i), static_cast<Index>(j));
            weight_sum += w;
        }
    }
    rep.weighted_mean_cka = weight_sum > 0.0 ? cross_sum / weight_sum : 0.0;
    rep.decomposition_residual = 1.0 / rep.gamma_joint - (inv_ortho + cross_sum);
    return rep;
}

}  // namespace prdim
