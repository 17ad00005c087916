#include "prdim/estimator.hpp"

#include <cmath>
#include <sstream>

#include "prdim/summation.hpp"

namespace prdim {

namespace {

struct PatternSums {
    // plain sums of r_{ijkl} over the named index patterns, after the
    // feature-axis treatment (alpha = beta terms subtracted or kept)
    double iijj, ijij, ijji, iiii, iiij, iiji, iijl, ijil, ijjl, ijlj, ijlm;
};

// Each pattern sum splits into a Gram part and a coincident-feature part.
// Pattern -> scalar mapping (free indices summed over everything):
//   iijj: sum d_i d_j            = tr_g^2            coincident: s_c2
//   ijij: sum G_ij^2             = frob_g                        s_aa_bb
//   ijji: sum G_ij G_ji          = tr_g2                         s_c2
//   iiii: sum d_i^2              = d2                            s_aabb
//   iiij: sum d_i G_ij           = dtp     (== ijii)             s_aab_b
//   iiji: sum d_i G_ji           = dtq     (== ijjj)             s_abb_a
//   iijl: sum d_i G_jl           = tr_g*sum_g (== ijll)          s_cab
//   ijil: sum G_ij G_il          = p2                            s_aa_b2
//   ijjl: sum G_ij G_jl          = ptq     (== ijli)             s_cab
//   ijlj: sum G_ij G_lj          = q2                            s_bb_a2
//   ijlm: (sum G)^2              = sum_g^2                       s_ab_sq
PatternSums pattern_sums(const ContractionSums& s, bool corr2) {
    const double w = corr2 ? 1.0 : 0.0;
    PatternSums r;
    r.iijj = s.tr_g * s.tr_g - w * s.s_c2;
    r.ijij = s.frob_g - w * s.s_aa_bb;
    r.ijji = s.tr_g2 - w * s.s_c2;
    r.iiii = s.d2 - w * s.s_aabb;
    r.iiij = s.dtp - w * s.s_aab_b;
    r.iiji = s.dtq - w * s.s_abb_a;
    r.iijl = s.tr_g * s.sum_g - w * s.s_cab;
    r.ijil = s.p2 - w * s.s_aa_b2;
    r.ijjl = s.ptq - w * s.s_cab;
    r.ijlj = s.q2 - w * s.s_bb_a2;
    r.ijlm = s.sum_g * s.sum_g - w * s.s_ab_sq;
    return r;
}

}  // namespace

TermEngine::TermEngine(const SampleMatrix& phi, const EstimatorVariant& variant,
                       const std::optional<WeightVector>& weights) {
    init(phi.values(), nullptr, variant, weights);
}

TermEngine::TermEngine(const TrialPair& pair, const EstimatorVariant& variant,
                       const std::optional<WeightVector>& weights) {
    init(pair.trial1().values(), &pair.trial2().values(), variant, weights);
}

void TermEngine::init(const Matrix& m1, const Matrix* m2, const EstimatorVariant& variant,
                      const std::optional<WeightVector>& weights) {
    centering_ = variant.centering;
    noise_corrected_ = m2 != nullptr;
    symmetrize_ = variant.symmetrize_trials && noise_corrected_;
    transposed_ = centering_ == Centering::neuron;

    const Index p = m1.rows();
    if (weights && weights->size() != p) {
        throw DegenerateWeights("weight vector length does not match the row count");
    }

    // Weights scale the original rows; every summand then carries one weight
    // factor per slot of its index tuple, which is exactly the
    // multiplicity-counted product the weighted sums require.
    Matrix a = m1;
    Matrix b;
    if (m2 != nullptr) b = *m2;
    if (weights) {
        a = weights->weights().asDiagonal() * a;
        if (m2 != nullptr) b = weights->weights().asDiagonal() * b;
    }
    if (transposed_) {
        a = a.transpose().eval();
        if (m2 != nullptr) b = b.transpose().eval();
    }

    const Index n4 = a.rows();  // sample axis of the effective frame
    const Index n2 = a.cols();  // feature axis

    // Sample-axis weight power sums. With weights on the original rows they
    // are plain counts whenever the rows sit on the feature axis instead.
    const bool weights_on_sample = weights && !transposed_;
    const bool weights_on_feature = weights && transposed_;
    if (weights_on_sample) {
        const Vector& s = weights->weights();
        s1_ = pairwise_sum(s);
        s2_ = pairwise_sum(s.size(), [&](std::ptrdiff_t i) { return s[i] * s[i]; });
        s3_ = pairwise_sum(s.size(), [&](std::ptrdiff_t i) { return s[i] * s[i] * s[i]; });
        s4_ = pairwise_sum(s.size(), [&](std::ptrdiff_t i) {
            const double v = s[i] * s[i];
            return v * v;
        });
    } else {
        const auto n = static_cast<double>(n4);
        s1_ = s2_ = s3_ = s4_ = n;
    }
    if (weights_on_feature) {
        // each feature index appears twice per summand, so the effective
        // per-feature weight is the square
        const Vector& s = weights->weights();
        u1_ = pairwise_sum(s.size(), [&](std::ptrdiff_t i) { return s[i] * s[i]; });
        u2_ = pairwise_sum(s.size(), [&](std::ptrdiff_t i) {
            const double v = s[i] * s[i];
            return v * v;
        });
    } else {
        const auto n = static_cast<double>(n2);
        u1_ = u2_ = n;
    }

    if (noise_corrected_) {
        sums_ = compute_contraction_sums(a, b, false);
        if (symmetrize_) sums_swapped_ = compute_contraction_sums(b, a, false);
    } else {
        sums_ = compute_contraction_sums(a, a, true);
    }
}

TermBreakdown TermEngine::assemble(const ContractionSums& s, bool corr4, bool corr2) const {
    const PatternSums r = pattern_sums(s, corr2);

    double n1, n2, n3, n4, n5;
    double w1, w2, w5;
    if (corr4) {
        // unequal-index sums by inclusion-exclusion over index coincidences;
        // coincident patterns that coincide after within-pair symmetry are
        // merged (ijll = iijl, ijli = ijjl, ijii = iiij, ijjj = iiji)
        n1 = r.iijj - r.iiii;
        n2 = r.iijl - r.iiij - r.iiji - r.iijj + 2.0 * r.iiii;
        n3 = r.ijij - r.iiii;
        n4 = r.ijjl - r.iiij - r.ijji - r.iiji + 2.0 * r.iiii;
        n5 = r.ijlm - (2.0 * r.iijl + r.ijil + 2.0 * r.ijjl + r.ijlj) +
             (r.iijj + r.ijij + r.ijji) + 2.0 * (2.0 * r.iiij + 2.0 * r.iiji) - 6.0 * r.iiii;
        // matching weight-product sums over distinct tuples (plain falling
        // factorials of the sample count when unweighted)
        w1 = s2_ * s2_ - s4_;
        w2 = s2_ * s1_ * s1_ - 2.0 * s3_ * s1_ - s2_ * s2_ + 2.0 * s4_;
        w5 = s1_ * s1_ * s1_ * s1_ - 6.0 * s2_ * s1_ * s1_ + 3.0 * s2_ * s2_ +
             8.0 * s3_ * s1_ - 6.0 * s4_;
    } else {
        n1 = r.iijj;
        n2 = r.iijl;
        n3 = r.ijij;
        n4 = r.ijjl;
        n5 = r.ijlm;
        w1 = s2_ * s2_;
        w2 = s2_ * s1_ * s1_;
        w5 = s1_ * s1_ * s1_ * s1_;
    }
    const double nf = corr2 ? u1_ * u1_ - u2_ : u1_ * u1_;

    TermBreakdown t;
    t.t1 = n1 / (w1 * nf);
    t.t2 = n2 / (w2 * nf);
    t.t3 = n3 / (w1 * nf);
    t.t4 = n4 / (w2 * nf);
    t.t5 = n5 / (w5 * nf);
    if (centering_ == Centering::none) {
        t.a = t.t1;
        t.b = t.t3;
    } else {
        t.a = t.t1 - 2.0 * t.t2 + t.t5;
        t.b = t.t3 - 2.0 * t.t4 + t.t5;
    }
    return t;
}

TermBreakdown TermEngine::terms(Correction correction) const {
    const bool corr_rows = correction == Correction::row || correction == Correction::both;
    const bool corr_cols = correction == Correction::col || correction == Correction::both;
    // corrections follow the original axes: after transposition the row
    // correction lands on the feature axis and vice versa
    const bool corr4 = transposed_ ? corr_cols : corr_rows;
    const bool corr2 = transposed_ ? corr_rows : corr_cols;

    const Index n4 = sums_.n_sample;
    const Index n2 = sums_.n_feature;
    if (corr4 && n4 < 4) {
        if (transposed_) {
            throw InsufficientColumns("column correction needs at least 4 columns");
        }
        throw InsufficientRows("row correction needs at least 4 rows");
    }
    if (corr2 && n2 < 2) {
        if (transposed_) {
            throw InsufficientRows("row correction needs at least 2 rows");
        }
        throw InsufficientColumns("column correction needs at least 2 columns");
    }

    TermBreakdown t = assemble(sums_, corr4, corr2);
    if (symmetrize_) {
        const TermBreakdown u = assemble(sums_swapped_, corr4, corr2);
        t.t1 = 0.5 * (t.t1 + u.t1);
        t.t2 = 0.5 * (t.t2 + u.t2);
        t.t3 = 0.5 * (t.t3 + u.t3);
        t.t4 = 0.5 * (t.t4 + u.t4);
        t.t5 = 0.5 * (t.t5 + u.t5);
        if (centering_ == Centering::none) {
            t.a = t.t1;
            t.b = t.t3;
        } else {
            t.a = t.t1 - 2.0 * t.t2 + t.t5;
            t.b = t.t3 - 2.0 * t.t4 + t.t5;
        }
    }
    return t;
}

DimEstimate TermEngine::estimate(Correction correction) const {
    DimEstimate est;
    est.variant.correction = correction;
    est.variant.centering = centering_;
    est.variant.noise_corrected = noise_corrected_;
    est.variant.symmetrize_trials = symmetrize_;
    est.terms = terms(correction);

    const double a = est.terms.a;
    const double b = est.terms.b;
    if (b > 0.0 && std::isfinite(a / b)) {
        est.valid = true;
        est.value = a / b;
    } else {
        est.valid = false;
        est.value = std::numeric_limits<double>::quiet_NaN();
        std::ostringstream msg;
        if (!(b > 0.0)) {
            msg << "denominator nonpositive (B = " << b << ")";
        } else {
            msg << "non-finite ratio (A = " << a << ", B = " << b << ")";
        }
        est.diagnostics = msg.str();
    }
    return est;
}

TermBreakdown compute_terms(const SampleMatrix& phi, const EstimatorVariant& variant,
                            const std::optional<WeightVector>& weights) {
    return TermEngine(phi, variant, weights).terms(variant.correction);
}

TermBreakdown compute_terms(const TrialPair& pair, const EstimatorVariant& variant,
                            const std::optional<WeightVector>& weights) {
    return TermEngine(pair, variant, weights).terms(variant.correction);
}

DimEstimate estimate_dimensionality(const SampleMatrix& phi, const EstimatorVariant& variant,
                                    const std::optional<WeightVector>& weights) {
    return TermEngine(phi, variant, weights).estimate(variant.correction);
}

DimEstimate estimate_dimensionality(const TrialPair& pair, const EstimatorVariant& variant,
                                    const std::optional<WeightVector>& weights) {
    return TermEngine(pair, variant, weights).estimate(variant.correction);
}

namespace {

template <class Input>
std::map<Correction, DimEstimate> all_variants_impl(const Input& input,
                                                    const std::optional<WeightVector>& weights,
                                                    Centering centering, bool symmetrize) {
    EstimatorVariant variant;
    variant.centering = centering;
    variant.symmetrize_trials = symmetrize;
    const TermEngine engine(input, variant, weights);
    std::map<Correction, DimEstimate> out;
    for (const Correction c :
         {Correction::naive, Correction::row, Correction::col, Correction::both}) {
        out.emplace(c, engine.estimate(c));
    }
    return out;
}

}  // namespace

std::map<Correction, DimEstimate> estimate_all_variants(const SampleMatrix& phi,
                                                        const std::optional<WeightVector>& weights,
                                                        Centering centering) {
    return all_variants_impl(phi, weights, centering, false);
}

std::map<Correction, DimEstimate> estimate_all_variants(const TrialPair& pair,
                                                        const std::optional<WeightVector>& weights,
                                                        Centering centering,
                                                        bool symmetrize_trials) {
    return all_variants_impl(pair, weights, centering, symmetrize_trials);
}

}  // namespace prdim
