#include <doctest.h>

#include "prdim/oracle.hpp"
#include "test_util.hpp"

using namespace prdim;
using testutil::rel_err;

TEST_CASE("oracle on the all-ones matrix: centered terms cancel") {
    const SampleMatrix phi(Matrix::Ones(4, 2));
    const TermBreakdown t = direct_terms(phi, {});
    CHECK(t.a == doctest::Approx(0.0));
    CHECK(t.b == doctest::Approx(0.0));
}

TEST_CASE("oracle on the 2x2 identity, naive and uncentered") {
    // 4 of the 16 (i, j, alpha, beta) products are 1, the rest vanish
    EstimatorVariant v;
    v.correction = Correction::naive;
    v.centering = Centering::none;
    const TermBreakdown t = direct_terms(SampleMatrix(Matrix::Identity(2, 2)), v);
    CHECK(t.t1 == doctest::Approx(0.25));
    CHECK(t.a == doctest::Approx(0.25));
}

TEST_CASE("oracle size cap") {
    CHECK_THROWS_AS(direct_terms(SampleMatrix(Matrix::Ones(13, 4)), {}), MatrixTooLargeForOracle);
    CHECK_THROWS_AS(direct_terms(SampleMatrix(Matrix::Ones(8, 9)), {}), MatrixTooLargeForOracle);
}

TEST_CASE("population reference recovers rank-1") {
    PopulationSpec spec;
    spec.kind = ModelKind::linear;
    spec.latent_dim = 1;
    const PopulationReference ref = population_reference(spec, 3000, 3000, 7);
    CHECK(ref.gamma_pop == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(ref.b_pop > 0.0);
    CHECK(ref.standard_error_gamma >= 0.0);
}

TEST_CASE("population reference is stable under doubling") {
    PopulationSpec spec;
    spec.kind = ModelKind::linear;
    spec.latent_dim = 5;
    const PopulationReference small = population_reference(spec, 1200, 1200, 3);
    const PopulationReference big = population_reference(spec, 2400, 2400, 4);
    const double se =
        std::sqrt(small.standard_error_gamma * small.standard_error_gamma +
                  big.standard_error_gamma * big.standard_error_gamma);
    CHECK(std::abs(small.gamma_pop - big.gamma_pop) < 3.0 * se + 0.05);
    CHECK(rel_err(small.gamma_pop, 5.0) < 0.05);
}
