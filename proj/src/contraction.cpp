#include "prdim/contraction.hpp"

#include <vector>

#include "prdim/summation.hpp"

namespace prdim {

namespace {

// Row sums of G without transposing it. Columns are accumulated into
// per-panel partials (contiguous inner loops), and the panel partials are
// combined pairwise so long rows do not degrade to left-to-right sums.
Vector panel_row_sums(const Matrix& g) {
    const Index p = g.rows();
    const Index n = g.cols();
    constexpr Index kPanel = 256;
    const Index panels = (n + kPanel - 1) / kPanel;
    Matrix partial = Matrix::Zero(p, panels);
    for (Index panel = 0; panel < panels; ++panel) {
        const Index j0 = panel * kPanel;
        const Index j1 = std::min(n, j0 + kPanel);
        for (Index j = j0; j < j1; ++j) {
            partial.col(panel) += g.col(j);
        }
    }
    Vector out(p);
    for (Index i = 0; i < p; ++i) {
        out[i] = pairwise_sum(panels, [&](std::ptrdiff_t k) { return partial(i, k); });
    }
    return out;
}

Vector column_pairwise_sums(const Matrix& g) {
    Vector out(g.cols());
    for (Index j = 0; j < g.cols(); ++j) {
        out[j] = pairwise_sum(g.col(j).data(), g.rows());
    }
    return out;
}

}  // namespace

ContractionSums compute_contraction_sums(const Eigen::Ref<const Matrix>& a,
                                         const Eigen::Ref<const Matrix>& b, bool symmetric) {
    const Index p = a.rows();
    const Index q = a.cols();

    Matrix g(p, p);
    if (symmetric) {
        g.setZero();
        g.selfadjointView<Eigen::Lower>().rankUpdate(a);
        g.triangularView<Eigen::StrictlyUpper>() = g.transpose();
    } else {
        g.noalias() = a * b.transpose();
    }

    ContractionSums s;
    s.n_sample = p;
    s.n_feature = q;
    s.symmetric = symmetric;

    const double* gd = g.data();
    const Vector diag = g.diagonal();
    const Vector col_sums = column_pairwise_sums(g);
    const Vector row_sums = symmetric ? col_sums : panel_row_sums(g);

    s.tr_g = pairwise_sum(diag);
    s.sum_g = pairwise_sum(gd, p * p);
    s.frob_g = pairwise_sum(static_cast<std::ptrdiff_t>(p) * p,
                            [gd](std::ptrdiff_t i) { return gd[i] * gd[i]; });
    s.tr_g2 = symmetric ? s.frob_g
                        : pairwise_sum(static_cast<std::ptrdiff_t>(p) * p, [&](std::ptrdiff_t n) {
                              const Index i = static_cast<Index>(n) % p;
                              const Index j = static_cast<Index>(n) / p;
                              return g(i, j) * g(j, i);
                          });
    s.d2 = pairwise_dot(diag, diag);
    s.dtp = pairwise_dot(diag, row_sums);
    s.dtq = symmetric ? s.dtp : pairwise_dot(diag, col_sums);
    s.ptq = pairwise_dot(row_sums, col_sums);
    s.p2 = symmetric ? s.ptq : pairwise_dot(row_sums, row_sums);
    s.q2 = symmetric ? s.ptq : pairwise_dot(col_sums, col_sums);

    // Feature-axis moment vectors. For the single-trial case B aliases A:
    // c = aa, b = a, abb = aab, and aabb is the fourth power sum.
    auto column_moment = [p](const Eigen::Ref<const Matrix>& m, auto&& term) {
        Vector out(m.cols());
        for (Index j = 0; j < m.cols(); ++j) {
            const double* col = m.col(j).data();
            out[j] = pairwise_sum(p, [&](std::ptrdiff_t i) { return term(col[i]); });
        }
        return out;
    };
    auto column_moment2 = [p](const Eigen::Ref<const Matrix>& m1, const Eigen::Ref<const Matrix>& m2,
                              auto&& term) {
        Vector out(m1.cols());
        for (Index j = 0; j < m1.cols(); ++j) {
            const double* c1 = m1.col(j).data();
            const double* c2 = m2.col(j).data();
            out[j] = pairwise_sum(p, [&](std::ptrdiff_t i) { return term(c1[i], c2[i]); });
        }
        return out;
    };

    const Vector va = column_moment(a, [](double x) { return x; });
    const Vector vaa = column_moment(a, [](double x) { return x * x; });
    Vector vb, vbb, vc, vaab, vabb, vaabb;
    if (symmetric) {
        vb = va;
        vbb = vaa;
        vc = vaa;
        vaab = column_moment(a, [](double x) { return x * x * x; });
        vabb = vaab;
        vaabb = column_moment(a, [](double x) { return x * x * x * x; });
    } else {
        vb = column_moment(b, [](double x) { return x; });
        vbb = column_moment(b, [](double x) { return x * x; });
        vc = column_moment2(a, b, [](double x, double y) { return x * y; });
        vaab = column_moment2(a, b, [](double x, double y) { return x * x * y; });
        vabb = column_moment2(a, b, [](double x, double y) { return x * y * y; });
        vaabb = column_moment2(a, b, [](double x, double y) { return x * x * y * y; });
    }

    s.s_c2 = pairwise_dot(vc, vc);
    s.s_cab = pairwise_sum(q, [&](std::ptrdiff_t j) { return vc[j] * va[j] * vb[j]; });
    s.s_aa_bb = pairwise_dot(vaa, vbb);
    s.s_ab_sq = pairwise_sum(q, [&](std::ptrdiff_t j) {
        const double ab = va[j] * vb[j];
        return ab * ab;
    });
    s.s_aab_b = pairwise_dot(vaab, vb);
    s.s_abb_a = pairwise_dot(vabb, va);
    s.s_aabb = pairwise_sum(vaabb);
    s.s_aa_b2 = pairwise_sum(q, [&](std::ptrdiff_t j) { return vaa[j] * vb[j] * vb[j]; });
    s.s_bb_a2 = pairwise_sum(q, [&](std::ptrdiff_t j) { return vbb[j] * va[j] * va[j]; });
    return s;
}

ContractionContext::ContractionContext(Matrix a, Matrix b, bool two_trial,
                                       bool require_feature_pairs)
    : a_(std::move(a)), b_(std::move(b)), two_trial_(two_trial) {
    if (a_.rows() < 1) throw InsufficientRows("contraction needs at least one sample");
    if (require_feature_pairs && a_.cols() < 2) {
        throw FeatureAxisTooSmall(
            "feature axis has fewer than 2 entries; the unequal-pair sum is empty");
    }
    if (two_trial_) {
        sums_ = compute_contraction_sums(a_, b_, false);
    } else {
        sums_ = compute_contraction_sums(a_, a_, true);
    }
}

double ContractionContext::unequal_feature_sum(Index i, Index j, Index k, Index l) const {
    const Matrix& a = a_;
    const Matrix& b = two_trial_ ? b_ : a_;
    const Index q = a.cols();
    const double full = pairwise_sum(q, [&](std::ptrdiff_t u) { return a(i, u) * b(j, u); }) *
                        pairwise_sum(q, [&](std::ptrdiff_t u) { return a(k, u) * b(l, u); });
    const double coincident = pairwise_sum(
        q, [&](std::ptrdiff_t u) { return a(i, u) * b(j, u) * a(k, u) * b(l, u); });
    return full - coincident;
}

namespace {

ContractionContext make_context(const Matrix& m1, const Matrix* m2, FeatureAxis axis) {
    const bool transpose = axis == FeatureAxis::row;
    Matrix a = transpose ? Matrix(m1.transpose()) : m1;
    Matrix b;
    if (m2 != nullptr) b = transpose ? Matrix(m2->transpose()) : *m2;
    return ContractionContext(std::move(a), std::move(b), m2 != nullptr, true);
}

}  // namespace

ContractionContext unequal_pair_contraction(const SampleMatrix& phi, FeatureAxis axis) {
    return make_context(phi.values(), nullptr, axis);
}

ContractionContext unequal_pair_contraction(const TrialPair& pair, FeatureAxis axis) {
    return make_context(pair.trial1().values(), &pair.trial2().values(), axis);
}

}  // namespace prdim
