#pragma once

#include <cstdint>
#include <optional>

#include "prdim/synth.hpp"
#include "prdim/types.hpp"

namespace prdim {

// Population-level numerator, denominator and dimensionality measured on a
// single very large draw, with 10-fold standard errors. Serves as the
// ground truth that small-sample estimates are validated against, so the
// reference sizes should dwarf the sample sizes under test (>= 10x).
struct PopulationReference {
    double a_pop = 0.0;
    double b_pop = 0.0;
    double gamma_pop = 0.0;
    double standard_error_a = 0.0;
    double standard_error_b = 0.0;
    double standard_error_gamma = 0.0;
    Index p_ref = 0;
    Index q_ref = 0;
};

// Brute-force reference: literal nested loops over index tuples with the
// distinctness pattern of each term, written from the term definitions
// rather than the expansion identities. O(P^4 Q^2); capped at P <= 12,
// Q <= 8.
TermBreakdown direct_terms(const SampleMatrix& phi, const EstimatorVariant& variant,
                           const std::optional<WeightVector>& weights = std::nullopt);
TermBreakdown direct_terms(const TrialPair& pair, const EstimatorVariant& variant,
                           const std::optional<WeightVector>& weights = std::nullopt);

// Naive trace formulas evaluated on one huge draw from the generator; the
// O(1/P_ref + 1/Q_ref) bias is negligible at reference sizes. Standard
// errors come from a 10-fold row split.
PopulationReference population_reference(const PopulationSpec& spec, Index p_ref, Index q_ref,
                                         std::uint64_t seed, Centering centering = Centering::task);

}  // namespace prdim
