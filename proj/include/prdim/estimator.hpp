#pragma once

#include <map>
#include <optional>

#include "prdim/contraction.hpp"
#include "prdim/types.hpp"

namespace prdim {

// Assembles the five term estimates for any correction from one set of
// contraction sums. Building the engine costs the single O(P^2 Q) pass;
// each correction afterwards is O(1), so batch evaluation over corrections
// shares all the heavy work.
class TermEngine {
  public:
    TermEngine(const SampleMatrix& phi, const EstimatorVariant& variant,
               const std::optional<WeightVector>& weights = std::nullopt);
    TermEngine(const TrialPair& pair, const EstimatorVariant& variant,
               const std::optional<WeightVector>& weights = std::nullopt);

    TermBreakdown terms(Correction correction) const;
    DimEstimate estimate(Correction correction) const;

  private:
    void init(const Matrix& m1, const Matrix* m2, const EstimatorVariant& variant,
              const std::optional<WeightVector>& weights);
    TermBreakdown assemble(const ContractionSums& s, bool corr4, bool corr2) const;

    Centering centering_ = Centering::task;
    bool noise_corrected_ = false;
    bool symmetrize_ = false;
    bool transposed_ = false;  // feature axis = original rows
    ContractionSums sums_;
    ContractionSums sums_swapped_;  // trial order (2,1); only when symmetrizing
    // power sums of the sample-axis weights (counts when unweighted)
    double s1_ = 0.0, s2_ = 0.0, s3_ = 0.0, s4_ = 0.0;
    // power sums of the feature-axis weights
    double u1_ = 0.0, u2_ = 0.0;
};

TermBreakdown compute_terms(const SampleMatrix& phi, const EstimatorVariant& variant,
                            const std::optional<WeightVector>& weights = std::nullopt);
TermBreakdown compute_terms(const TrialPair& pair, const EstimatorVariant& variant,
                            const std::optional<WeightVector>& weights = std::nullopt);

DimEstimate estimate_dimensionality(const SampleMatrix& phi, const EstimatorVariant& variant,
                                    const std::optional<WeightVector>& weights = std::nullopt);
DimEstimate estimate_dimensionality(const TrialPair& pair, const EstimatorVariant& variant,
                                    const std::optional<WeightVector>& weights = std::nullopt);

// All four corrections from a single contraction pass; values are identical
// to four independent estimate_dimensionality calls.
std::map<Correction, DimEstimate> estimate_all_variants(
    const SampleMatrix& phi, const std::optional<WeightVector>& weights = std::nullopt,
    Centering centering = Centering::task);
std::map<Correction, DimEstimate> estimate_all_variants(
    const TrialPair& pair, const std::optional<WeightVector>& weights = std::nullopt,
    Centering centering = Centering::task, bool symmetrize_trials = false);

}  // namespace prdim
