#include "prdim/oracle.hpp"

#include <array>
#include <cmath>
#include <vector>

namespace prdim {

namespace {

constexpr Index kMaxOracleRows = 12;
constexpr Index kMaxOracleCols = 8;

// One t-term by direct summation. `pattern` assigns the four v-slots to
// free indices (0-based positions into the tuple); slots 1 and 2 read
// column alpha of trials (1, 2), slots 3 and 4 column beta.
struct TermSpec {
    int n_free;
    std::array<int, 4> slot;  // free-index position feeding each slot
};

// t1..t5 index patterns: iijj, iijl, ijij, ijjl, ijlr
constexpr std::array<TermSpec, 5> kTerms = {{
    {2, {0, 0, 1, 1}},
    {3, {0, 0, 1, 2}},
    {2, {0, 1, 0, 1}},
    {3, {0, 1, 1, 2}},
    {4, {0, 1, 2, 3}},
}};

struct OracleFrame {
    Matrix a;  // effective trial 1, sample axis on rows
    Matrix b;  // effective trial 2
    bool corr4 = false;
    bool corr2 = false;
    bool transposed_ = false;
    const WeightVector* weights = nullptr;  // weights index the original rows
};

double term_by_loops(const OracleFrame& f, const TermSpec& spec) {
    const Index n4 = f.a.rows();
    const Index n2 = f.a.cols();
    // per-slot weight: original-row weight of the entry the slot reads
    auto slot_weight = [&](Index sample, Index feature) {
        if (f.weights == nullptr) return 1.0;
        return f.weights->weights()[f.transposed_ ? feature : sample];
    };

    double num = 0.0;
    double wsum = 0.0;
    std::array<Index, 4> idx{};
    std::vector<Index> tup(static_cast<std::size_t>(spec.n_free), 0);

    auto all_distinct = [&]() {
        for (int u = 0; u < spec.n_free; ++u) {
            for (int v = u + 1; v < spec.n_free; ++v) {
                if (tup[u] == tup[v]) return false;
            }
        }
        return true;
    };

    // odometer over the free sample indices
    while (true) {
        if (!f.corr4 || all_distinct()) {
            for (int s = 0; s < 4; ++s) idx[s] = tup[static_cast<std::size_t>(spec.slot[s])];
            for (Index alpha = 0; alpha < n2; ++alpha) {
                for (Index beta = 0; beta < n2; ++beta) {
                    if (f.corr2 && alpha == beta) continue;
                    const double w = slot_weight(idx[0], alpha) * slot_weight(idx[1], alpha) *
                                     slot_weight(idx[2], beta) * slot_weight(idx[3], beta);
                    num += w * f.a(idx[0], alpha) * f.b(idx[1], alpha) * f.a(idx[2], beta) *
                           f.b(idx[3], beta);
                    wsum += w;
                }
            }
        }
        int pos = spec.n_free - 1;
        while (pos >= 0 && ++tup[static_cast<std::size_t>(pos)] == n4) {
            tup[static_cast<std::size_t>(pos)] = 0;
            --pos;
        }
        if (pos < 0) break;
    }
    return num / wsum;
}

TermBreakdown oracle_terms(const Matrix& m1, const Matrix* m2, const EstimatorVariant& variant,
                           const std::optional<WeightVector>& weights) {
    if (m1.rows() > kMaxOracleRows || m1.cols() > kMaxOracleCols) {
        throw MatrixTooLargeForOracle("oracle is capped at 12 rows x 8 columns");
    }
    if (weights && weights->size() != m1.rows()) {
        throw DegenerateWeights("weight vector length does not match the row count");
    }

    const bool transposed = variant.centering == Centering::neuron;
    const bool corr_rows =
        variant.correction == Correction::row || variant.correction == Correction::both;
    const bool corr_cols =
        variant.correction == Correction::col || variant.correction == Correction::both;

    OracleFrame f;
    f.a = transposed ? Matrix(m1.transpose()) : m1;
    f.b = m2 != nullptr ? (transposed ? Matrix(m2->transpose()) : *m2) : f.a;
    f.corr4 = transposed ? corr_cols : corr_rows;
    f.corr2 = transposed ? corr_rows : corr_cols;
    f.transposed_ = transposed;
    f.weights = weights ? &*weights : nullptr;

    if (f.corr4 && f.a.rows() < 4) {
        if (transposed) throw InsufficientColumns("column correction needs at least 4 columns");
        throw InsufficientRows("row correction needs at least 4 rows");
    }
    if (f.corr2 && f.a.cols() < 2) {
        if (transposed) throw InsufficientRows("row correction needs at least 2 rows");
        throw InsufficientColumns("column correction needs at least 2 columns");
    }

    auto run = [&](const OracleFrame& frame) {
        TermBreakdown t;
        t.t1 = term_by_loops(frame, kTerms[0]);
        t.t2 = term_by_loops(frame, kTerms[1]);
        t.t3 = term_by_loops(frame, kTerms[2]);
        t.t4 = term_by_loops(frame, kTerms[3]);
        t.t5 = term_by_loops(frame, kTerms[4]);
        return t;
    };

    TermBreakdown t = run(f);
    if (variant.symmetrize_trials && m2 != nullptr) {
        OracleFrame g = f;
        std::swap(g.a, g.b);
        const TermBreakdown u = run(g);
        t.t1 = 0.5 * (t.t1 + u.t1);
        t.t2 = 0.5 * (t.t2 + u.t2);
        t.t3 = 0.5 * (t.t3 + u.t3);
        t.t4 = 0.5 * (t.t4 + u.t4);
        t.t5 = 0.5 * (t.t5 + u.t5);
    }
    if (variant.centering == Centering::none) {
        t.a = t.t1;
        t.b = t.t3;
    } else {
        t.a = t.t1 - 2.0 * t.t2 + t.t5;
        t.b = t.t3 - 2.0 * t.t4 + t.t5;
    }
    return t;
}

}  // namespace

TermBreakdown direct_terms(const SampleMatrix& phi, const EstimatorVariant& variant,
                           const std::optional<WeightVector>& weights) {
    return oracle_terms(phi.values(), nullptr, variant, weights);
}

TermBreakdown direct_terms(const TrialPair& pair, const EstimatorVariant& variant,
                           const std::optional<WeightVector>& weights) {
    return oracle_terms(pair.trial1().values(), &pair.trial2().values(), variant, weights);
}

namespace {

// Naive A, B on one matrix through the centered-trace identities:
//   A = (tr(K_c)/P)^2, B = tr(K_c^2)/P^2, with K_c the (optionally)
//   row-centered covariance. tr(K_c) = tr(K) - sum(K)/P and
//   tr(K_c^2) = tr(K^2) - 2|K 1|^2/P + (sum K)^2/P^2.
std::array<double, 2> naive_population_ab(const Matrix& phi, Centering centering) {
    const Index p = phi.rows();
    const Index q = phi.cols();
    Matrix g(p, p);
    g.setZero();
    g.selfadjointView<Eigen::Lower>().rankUpdate(phi);
    g.triangularView<Eigen::StrictlyUpper>() = g.transpose();

    const double pq = static_cast<double>(p) * static_cast<double>(q);
    const double tr = g.trace();
    const double frob = g.squaredNorm();
    if (centering == Centering::none) {
        return {tr * tr / (pq * pq), frob / (pq * pq)};
    }
    const Vector rowsum = g.rowwise().sum();
    const double total = rowsum.sum();
    const double pr = static_cast<double>(p);
    const double tr_c = tr - total / pr;
    const double frob_c = frob - 2.0 * rowsum.squaredNorm() / pr + total * total / (pr * pr);
    return {tr_c * tr_c / (pq * pq), frob_c / (pq * pq)};
}

}  // namespace

PopulationReference population_reference(const PopulationSpec& spec, Index p_ref, Index q_ref,
                                         std::uint64_t seed, Centering centering) {
    if (centering == Centering::neuron) {
        throw PreconditionError("population reference supports task or uncentered mode");
    }
    const SampleMatrix ref = generate(spec, p_ref, q_ref, seed);

    PopulationReference out;
    out.p_ref = p_ref;
    out.q_ref = q_ref;
    const auto ab = naive_population_ab(ref.values(), centering);
    out.a_pop = ab[0];
    out.b_pop = ab[1];
    if (!(out.b_pop > 0.0)) {
        throw NumericalError("population reference has nonpositive denominator");
    }
    out.gamma_pop = out.a_pop / out.b_pop;

    // 10-fold row split for standard errors of the fold means
    constexpr int kFolds = 10;
    std::vector<double> fa, fb, fg;
    for (int k = 0; k < kFolds; ++k) {
        const Index lo = p_ref * k / kFolds;
        const Index hi = p_ref * (k + 1) / kFolds;
        if (hi - lo < 2) continue;
        const Matrix fold = ref.values().middleRows(lo, hi - lo);
        const auto fab = naive_population_ab(fold, centering);
        fa.push_back(fab[0]);
        fb.push_back(fab[1]);
        if (fab[1] > 0.0) fg.push_back(fab[0] / fab[1]);
    }
    auto se = [](const std::vector<double>& v) {
        if (v.size() < 2) return 0.0;
        double mean = 0.0;
        for (const double x : v) mean += x;
        mean /= static_cast<double>(v.size());
        double var = 0.0;
        for (const double x : v) var += (x - mean) * (x - mean);
        var /= static_cast<double>(v.size() - 1);
        return std::sqrt(var / static_cast<double>(v.size()));
    };
    out.standard_error_a = se(fa);
    out.standard_error_b = se(fb);
    out.standard_error_gamma = se(fg);
    return out;
}

}  // namespace prdim
