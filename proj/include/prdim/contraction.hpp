#pragma once

#include "prdim/types.hpp"

namespace prdim {

// Which axis of the input plays the feature role (the paired alpha/beta
// axis). The other axis carries the four sample indices.
enum class FeatureAxis { column, row };

// Every unequal-index term sum is a signed combination of plain sums of
// r_{ijkl} = sum_ab G1[i,j] G1[k,l] patterns, where the per-pattern plain
// sums reduce to the scalars below. G = A B^T over the feature axis
// (A = B = Phi for a single trial); d, p, q are its diagonal, row sums and
// column sums. The s_* scalars are the alpha = beta corrections: each is a
// feature-axis sum of products of per-column moments of A and B. Nothing
// here is ever four-indexed; cost is one P x P Gram plus O(PQ) passes.
struct ContractionSums {
    // Gram-route scalars
    double tr_g = 0.0;    // sum_i G[i,i]
    double sum_g = 0.0;   // sum_ij G[i,j]
    double d2 = 0.0;      // sum_i G[i,i]^2
    double frob_g = 0.0;  // sum_ij G[i,j]^2
    double tr_g2 = 0.0;   // sum_ij G[i,j] G[j,i]
    double dtp = 0.0;     // sum_i G[i,i] p_i
    double dtq = 0.0;     // sum_i G[i,i] q_i
    double ptq = 0.0;     // sum_i p_i q_i
    double p2 = 0.0;      // sum_i p_i^2
    double q2 = 0.0;      // sum_i q_i^2

    // Single-feature (alpha = beta) aggregates. Notation: a = per-column
    // sum of A, b of B, c of A.*B, aa of A.^2, bb of B.^2, aab of A.^2.*B,
    // abb of A.*B.^2, aabb of A.^2.*B.^2.
    double s_c2 = 0.0;     // sum_a c^2
    double s_cab = 0.0;    // sum_a c*a*b
    double s_aa_bb = 0.0;  // sum_a aa*bb
    double s_ab_sq = 0.0;  // sum_a (a*b)^2
    double s_aab_b = 0.0;  // sum_a aab*b
    double s_abb_a = 0.0;  // sum_a abb*a
    double s_aabb = 0.0;   // sum_a aabb
    double s_aa_b2 = 0.0;  // sum_a aa*b^2
    double s_bb_a2 = 0.0;  // sum_a bb*a^2

    Index n_sample = 0;
    Index n_feature = 0;
    bool symmetric = true;
};

// `symmetric` marks A and B as the same matrix (single trial), enabling the
// rank-update Gram and aliased aggregates.
ContractionSums compute_contraction_sums(const Eigen::Ref<const Matrix>& a,
                                         const Eigen::Ref<const Matrix>& b, bool symmetric);

// Precomputed pairwise structures for one data set and feature axis. Holds
// the effective matrices (sample axis on rows) so individual contractions
// remain inspectable; all aggregate sums live in `sums`.
class ContractionContext {
  public:
    ContractionContext(Matrix a, Matrix b, bool two_trial, bool require_feature_pairs);

    Index n_sample() const { return a_.rows(); }
    Index n_feature() const { return a_.cols(); }
    bool two_trial() const { return two_trial_; }
    const ContractionSums& sums() const { return sums_; }
    const Matrix& effective_trial1() const { return a_; }
    const Matrix& effective_trial2() const { return two_trial_ ? b_ : a_; }

    // sum over unequal feature pairs of A[i,a] B[j,a] A[k,b] B[l,b]; the
    // r_{ijkl} building block before sample-axis aggregation. O(n_feature).
    double unequal_feature_sum(Index i, Index j, Index k, Index l) const;

  private:
    Matrix a_;
    Matrix b_;  // empty when single trial
    bool two_trial_ = false;
    ContractionSums sums_;
};

ContractionContext unequal_pair_contraction(const SampleMatrix& phi, FeatureAxis axis);
ContractionContext unequal_pair_contraction(const TrialPair& pair, FeatureAxis axis);

}  // namespace prdim
