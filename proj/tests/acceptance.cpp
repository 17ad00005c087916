// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Heavy experiments parallelize across seeds/instances; every
// tolerance is pinned in code.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstring>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "prdim/analysis.hpp"
#include "prdim/estimator.hpp"
#include "prdim/local_dim.hpp"
#include "prdim/oracle.hpp"
#include "prdim/parallel.hpp"
#include "prdim/philox.hpp"
#include "prdim/synth.hpp"

using namespace prdim;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

struct Check {
    Outcome& out;
    void require(bool ok, const std::string& what) {
        if (!ok) {
            out.pass = false;
            if (!out.detail.empty()) out.detail += "; ";
            out.detail += "FAILED " + what;
        }
    }
    void note(const std::string& what) {
        if (!out.detail.empty()) out.detail += "; ";
        out.detail += what;
    }
};

double rel_err(double got, double want) {
    const double scale = std::max(std::abs(want), std::abs(got));
    return scale == 0.0 ? 0.0 : std::abs(got - want) / scale;
}

double mean_of(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

std::string fmt(double v) {
    std::ostringstream s;
    s.precision(4);
    s << v;
    return s.str();
}

Matrix random_matrix(Index p, Index q, std::uint64_t seed, std::uint64_t stream = 970) {
    const CounterRng rng(seed, stream);
    Matrix m(p, q);
    for (Index j = 0; j < q; ++j) {
        for (Index i = 0; i < p; ++i) {
            m(i, j) = rng.normal(static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(j));
        }
    }
    return m;
}

// ------------------------------------------------------------ criterion 1
// Oracle equivalence on 1000 seeded random matrices across every variant:
// 4 corrections x 3 centerings x {single, pair} x {unweighted, weighted},
// per-term relative error <= 1e-10, within 2 minutes.
Outcome criterion_oracle_equivalence() {
    Outcome out;
    Check ck{out};
    const auto t0 = std::chrono::steady_clock::now();

    const int n_instances = 1000;
    std::atomic<int> failures{0};
    std::atomic<long> comparisons{0};
    parallel_for(n_instances, [&](std::ptrdiff_t inst) {
        const auto seed = static_cast<std::uint64_t>(inst);
        const PhiloxStream sizes_probe(seed, 971);
        PhiloxStream sizes(seed, 971);
        const Index p = 5 + static_cast<Index>(sizes.next_below(4));  // 5..8
        const Index q = 4 + static_cast<Index>(sizes.next_below(3));  // 4..6
        (void)sizes_probe;
        const SampleMatrix m1(random_matrix(p, q, seed));
        const SampleMatrix m2(random_matrix(p, q, seed, 972));
        const TrialPair pair(m1, m2);
        const CounterRng wrng(seed, 973);
        Vector w(p);
        for (Index i = 0; i < p; ++i) w[i] = std::abs(wrng.normal(static_cast<std::uint64_t>(i)));
        if (seed % 2 == 0) w[p - 1] = 0.0;
        const WeightVector weights(w);

        long local_cmp = 0;
        int local_fail = 0;
        for (const Correction corr :
             {Correction::naive, Correction::row, Correction::col, Correction::both}) {
            for (const Centering cent : {Centering::task, Centering::neuron, Centering::none}) {
                for (const bool pair_mode : {false, true}) {
                    for (const bool weighted : {false, true}) {
                        EstimatorVariant v;
                        v.correction = corr;
                        v.centering = cent;
                        v.symmetrize_trials = seed % 5 == 0;
                        const std::optional<WeightVector> wopt =
                            weighted ? std::optional<WeightVector>(weights) : std::nullopt;
                        const TermBreakdown got =
                            pair_mode ? compute_terms(pair, v, wopt) : compute_terms(m1, v, wopt);
                        const TermBreakdown want =
                            pair_mode ? direct_terms(pair, v, wopt) : direct_terms(m1, v, wopt);
                        const double worst = std::max(
                            {rel_err(got.t1, want.t1), rel_err(got.t2, want.t2),
                             rel_err(got.t3, want.t3), rel_err(got.t4, want.t4),
                             rel_err(got.t5, want.t5)});
                        ++local_cmp;
                        if (!(worst <= 1e-10)) ++local_fail;
                    }
                }
            }
        }
        comparisons += local_cmp;
        failures += local_fail;
    });

    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    ck.require(failures.load() == 0,
               std::to_string(failures.load()) + " of " + std::to_string(comparisons.load()) +
                   " variant comparisons exceeded 1e-10");
    ck.require(secs <= 120.0, "runtime " + fmt(secs) + "s exceeds 120s");
    ck.note(std::to_string(comparisons.load()) + " comparisons in " + fmt(secs) + "s");
    return out;
}

// ------------------------------------------------------------ criterion 2
// Linear model d=50, noise variance 0.2: mean gamma_both over 20 seeds at
// P=Q=1000 within 5% of 50; at P=Q=100 the naive estimate misses 50 by
// more than the corrected one. Within 5 minutes.
Outcome criterion_linear_model() {
    Outcome out;
    Check ck{out};
    const auto t0 = std::chrono::steady_clock::now();

    PopulationSpec spec;
    spec.latent_dim = 50;
    spec.noise_std = std::sqrt(0.2);

    std::vector<double> big(20), small_naive(20), small_both(20);
    parallel_for(20, [&](std::ptrdiff_t s) {
        const auto seed = static_cast<std::uint64_t>(s);
        const SampleMatrix m = generate(spec, 1000, 1000, 1000 + seed);
        big[static_cast<std::size_t>(s)] = estimate_dimensionality(m, {}).value;
        const SampleMatrix m2 = generate(spec, 100, 100, 2000 + seed);
        EstimatorVariant naive;
        naive.correction = Correction::naive;
        small_naive[static_cast<std::size_t>(s)] = estimate_dimensionality(m2, naive).value;
        small_both[static_cast<std::size_t>(s)] = estimate_dimensionality(m2, {}).value;
    });

    const double mean_big = mean_of(big);
    const double mean_naive = mean_of(small_naive);
    const double mean_both = mean_of(small_both);
    ck.require(std::abs(mean_big - 50.0) <= 0.05 * 50.0,
               "mean gamma_both at 1000x1000 = " + fmt(mean_big) + " not within 5% of 50");
    ck.require(std::abs(mean_naive - 50.0) > std::abs(mean_both - 50.0),
               "naive (" + fmt(mean_naive) + ") does not miss 50 by more than both (" +
                   fmt(mean_both) + ") at 100x100");
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    ck.require(secs <= 300.0, "runtime " + fmt(secs) + "s exceeds 300s");
    ck.note("gamma_both@1000=" + fmt(mean_big) + ", naive@100=" + fmt(mean_naive) +
            ", both@100=" + fmt(mean_both) + ", " + fmt(secs) + "s");
    return out;
}

// ------------------------------------------------------------ criterion 3
// Row/column selectivity: with Q fixed, the P-sweep leaves gamma_row flat
// (range <= 1/3 of gamma_col's range); symmetric with the axes swapped.
Outcome criterion_selectivity() {
    Outcome out;
    Check ck{out};

    PopulationSpec spec;
    spec.latent_dim = 50;
    spec.noise_std = std::sqrt(0.2);
    const std::vector<Index> sizes = {50, 100, 200, 400};
    const int n_seeds = 8;

    // P-sweep at full Q: one fresh matrix per seed, estimates per P
    std::vector<std::vector<double>> row_vals(sizes.size()), col_vals(sizes.size());
    std::vector<std::vector<double>> row_vals_t(sizes.size()), col_vals_t(sizes.size());
    for (auto& v : row_vals) v.resize(n_seeds);
    for (auto& v : col_vals) v.resize(n_seeds);
    for (auto& v : row_vals_t) v.resize(n_seeds);
    for (auto& v : col_vals_t) v.resize(n_seeds);

    parallel_for(n_seeds, [&](std::ptrdiff_t s) {
        const auto seed = static_cast<std::uint64_t>(s);
        for (std::size_t zi = 0; zi < sizes.size(); ++zi) {
            {
                const SampleMatrix m = generate(spec, sizes[zi], 1600, 3000 + seed);
                const TermEngine engine(m, {});
                row_vals[zi][static_cast<std::size_t>(s)] =
                    engine.estimate(Correction::row).value;
                col_vals[zi][static_cast<std::size_t>(s)] =
                    engine.estimate(Correction::col).value;
            }
            {
                const SampleMatrix m = generate(spec, 1600, sizes[zi], 4000 + seed);
                const TermEngine engine(m, {});
                row_vals_t[zi][static_cast<std::size_t>(s)] =
                    engine.estimate(Correction::row).value;
                col_vals_t[zi][static_cast<std::size_t>(s)] =
                    engine.estimate(Correction::col).value;
            }
        }
    });

    auto range_of_means = [&](const std::vector<std::vector<double>>& vals) {
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (const auto& v : vals) {
            const double m = mean_of(v);
            lo = std::min(lo, m);
            hi = std::max(hi, m);
        }
        return hi - lo;
    };

    const double row_range = range_of_means(row_vals);
    const double col_range = range_of_means(col_vals);
    ck.require(row_range <= col_range / 3.0,
               "P-sweep: gamma_row range " + fmt(row_range) + " vs gamma_col range " +
                   fmt(col_range));
    const double row_range_t = range_of_means(row_vals_t);
    const double col_range_t = range_of_means(col_vals_t);
    ck.require(col_range_t <= row_range_t / 3.0,
               "Q-sweep: gamma_col range " + fmt(col_range_t) + " vs gamma_row range " +
                   fmt(row_range_t));
    ck.note("P-sweep ranges row/col = " + fmt(row_range) + "/" + fmt(col_range) +
            "; Q-sweep col/row = " + fmt(col_range_t) + "/" + fmt(row_range_t));
    return out;
}

// ------------------------------------------------------------ criterion 4
// Two-trial noise correction: linear d=10, sigma_eps=1, P=Q=500, 50 seeds.
Outcome criterion_noise_correction() {
    Outcome out;
    Check ck{out};

    PopulationSpec spec;
    spec.latent_dim = 10;
    spec.noise_std = 1.0;
    const int n_seeds = 50;
    std::vector<double> corrected(n_seeds), single(n_seeds);
    parallel_for(n_seeds, [&](std::ptrdiff_t s) {
        const auto seed = static_cast<std::uint64_t>(s);
        const TrialPair pair = generate_trial_pair(spec, 500, 500, 5000 + seed);
        corrected[static_cast<std::size_t>(s)] = estimate_dimensionality(pair, {}).value;
        single[static_cast<std::size_t>(s)] =
            estimate_dimensionality(pair.trial1(), {}).value;
    });

    const double mean_corrected = mean_of(corrected);
    double mad_corrected = 0.0, mad_single = 0.0;
    for (int s = 0; s < n_seeds; ++s) {
        mad_corrected += std::abs(corrected[static_cast<std::size_t>(s)] - 10.0);
        mad_single += std::abs(single[static_cast<std::size_t>(s)] - 10.0);
    }
    mad_corrected /= n_seeds;
    mad_single /= n_seeds;

    ck.require(std::abs(mean_corrected - 10.0) <= 1.0,
               "noise-corrected mean " + fmt(mean_corrected) + " not within 10% of 10");
    ck.require(mad_single > mad_corrected,
               "single-trial deviation " + fmt(mad_single) + " not above corrected " +
                   fmt(mad_corrected));
    ck.note("corrected mean=" + fmt(mean_corrected) + ", MAD corrected/single=" +
            fmt(mad_corrected) + "/" + fmt(mad_single));
    return out;
}

// ------------------------------------------------------------ criterion 5
// Local dimensionality on the noisy RFF pair (d=2, sigma_eps=0.3, P=2000,
// Q=500): the corrected local estimate at the smallest admissible radius
// recovers 2 within 10% (mean over 5 seeds); TwoNN overestimates (> 3);
// the naive local estimate underestimates relative to the corrected one.
// "Admissible" = at least 97% of balls valid at that radius.
Outcome criterion_local_dimensionality() {
    Outcome out;
    Check ck{out};

    PopulationSpec spec;
    spec.kind = ModelKind::rff;
    spec.latent_dim = 2;
    spec.input_scale = 1.0;
    spec.noise_std = 0.3;
    const Index p = 2000, q = 500;
    const std::vector<double> radii = {8.0, 8.5, 9.0};
    const int n_seeds = 5;

    std::vector<double> both_at_star, naive_at_star, twonn_vals;
    for (int s = 0; s < n_seeds; ++s) {
        const TrialPair pair = generate_trial_pair(spec, p, q, 6000 + static_cast<std::uint64_t>(s));
        BallSpec ball;
        ball.metric = LocalMetric::euclidean;
        const auto sweep = radius_sweep(pair, ball, radii, {});

        double r_star = -1.0;
        double gamma_star = 0.0;
        for (const auto& res : sweep) {
            const double frac =
                static_cast<double>(res.valid_centers) / static_cast<double>(p);
            if (frac >= 0.97) {
                r_star = res.radius;
                gamma_star = res.mean_gamma;
                break;
            }
        }
        ck.require(r_star > 0.0, "seed " + std::to_string(s) + ": no admissible radius in grid");
        if (r_star < 0.0) continue;
        both_at_star.push_back(gamma_star);

        ball.radius = r_star;
        EstimatorVariant naive;
        naive.correction = Correction::naive;
        const LocalDimResult naive_res = local_dimensionality(pair, ball, naive);
        naive_at_star.push_back(naive_res.mean_gamma);

        const SampleMatrix mean_matrix(
            0.5 * (pair.trial1().values() + pair.trial2().values()));
        twonn_vals.push_back(twonn(mean_matrix));
    }

    const double mean_both = mean_of(both_at_star);
    const double mean_naive = mean_of(naive_at_star);
    const double mean_twonn = mean_of(twonn_vals);
    ck.require(std::abs(mean_both - 2.0) <= 0.2,
               "corrected local estimate " + fmt(mean_both) + " not within 10% of 2");
    ck.require(mean_twonn > 3.0, "TwoNN " + fmt(mean_twonn) + " not above 3");
    ck.require(mean_naive < mean_both,
               "naive local " + fmt(mean_naive) + " not below corrected " + fmt(mean_both));
    ck.note("local both=" + fmt(mean_both) + ", naive=" + fmt(mean_naive) +
            ", TwoNN=" + fmt(mean_twonn));
    return out;
}

// ------------------------------------------------------------ criterion 6
// Joint-dimensionality identities on random manifold collections, the
// identical-copies case, and orthogonal equal blocks.
Outcome criterion_alignment_identities() {
    Outcome out;
    Check ck{out};

    int worst_count = 0;
    double worst = 0.0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const std::size_t n = 2 + seed % 5;
        std::vector<SampleMatrix> manifolds;
        for (std::size_t i = 0; i < n; ++i) {
            const Index q = 4 + static_cast<Index>((seed * 3 + i) % 7);
            manifolds.emplace_back(random_matrix(30, q, 7000 + 100 * seed + i));
        }
        const AlignmentReport rep = alignment_report(manifolds);

        double rhs = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            rhs += rep.per_manifold[i].kappa / rep.per_manifold[i].gamma;
            for (std::size_t j = 0; j < n; ++j) {
                if (i == j) continue;
                rhs += std::sqrt(rep.per_manifold[i].kappa * rep.per_manifold[j].kappa /
                                 (rep.per_manifold[i].gamma * rep.per_manifold[j].gamma)) *
                       rep.cka_matrix(static_cast<Index>(i), static_cast<Index>(j));
            }
        }
        const double decomp = rel_err(1.0 / rep.gamma_joint, rhs);
        const double avg = rel_err((1.0 / rep.gamma_joint - 1.0 / rep.gamma_ortho) /
                                       (1.0 / rep.gamma_align - 1.0 / rep.gamma_ortho),
                                   rep.weighted_mean_cka);
        worst = std::max({worst, decomp, avg});
        if (decomp > 1e-10 || avg > 1e-10) ++worst_count;
    }
    ck.require(worst_count == 0, std::to_string(worst_count) +
                                     " collections broke the identities (worst " + fmt(worst) +
                                     ")");

    const Matrix base = random_matrix(40, 10, 8100);
    const AlignmentReport copies = alignment_report({SampleMatrix(base), SampleMatrix(base),
                                                     SampleMatrix(base)});
    ck.require(std::abs(copies.exd) <= 1e-9,
               "identical copies ExD = " + fmt(copies.exd));

    for (const int n : {2, 4, 5}) {
        const Index rows_per = 8;
        const Index p_total = rows_per * static_cast<Index>(n);
        const Matrix block = random_matrix(rows_per, 7, 8200 + static_cast<std::uint64_t>(n));
        std::vector<SampleMatrix> blocks;
        for (int i = 0; i < n; ++i) {
            Matrix m = Matrix::Zero(p_total, 7);
            m.middleRows(static_cast<Index>(i) * rows_per, rows_per) = block;
            blocks.emplace_back(std::move(m));
        }
        const AlignmentReport rep = alignment_report(blocks);
        ck.require(std::abs(rep.exd - (1.0 - 1.0 / n)) <= 1e-6,
                   "orthogonal blocks n=" + std::to_string(n) + ": ExD = " + fmt(rep.exd));
    }
    ck.note("worst identity residual " + fmt(worst));
    return out;
}

// ------------------------------------------------------------ criterion 7
// Appendix-level bias prediction: the predicted bias of the uncentered
// naive estimator at P=Q=200 matches a 5000-resample Monte Carlo within
// 30%; the corrected estimator's predicted bias is smaller; on-sphere
// inputs give |c - c'| <= 0.02.
Outcome criterion_bias_prediction() {
    Outcome out;
    Check ck{out};

    PopulationSpec spec;
    spec.latent_dim = 5;

    const SampleMatrix ref = generate(spec, 4000, 4000, 9100);
    const KernelMoments moments = estimate_kernel_moments(ref);

    const Index p = 200, q = 200;
    const int n_resamples = 5000;
    std::vector<double> naive_vals(n_resamples);
    EstimatorVariant naive_unc;
    naive_unc.correction = Correction::naive;
    naive_unc.centering = Centering::none;
    parallel_for(n_resamples, [&](std::ptrdiff_t s) {
        const SampleMatrix m = generate(spec, p, q, 20000 + static_cast<std::uint64_t>(s));
        naive_vals[static_cast<std::size_t>(s)] = estimate_dimensionality(m, naive_unc).value;
    });
    const double mc_bias = mean_of(naive_vals) - moments.gamma_pop;
    const BiasVariance pred_naive = predict_bias_variance(moments, p, q, Correction::naive);
    const BiasVariance pred_both = predict_bias_variance(moments, p, q, Correction::both);

    ck.require(rel_err(pred_naive.bias, mc_bias) <= 0.30,
               "predicted naive bias " + fmt(pred_naive.bias) + " vs Monte Carlo " +
                   fmt(mc_bias));
    ck.require(std::abs(pred_both.bias) < std::abs(pred_naive.bias),
               "corrected bias prediction is not smaller");

    // on-sphere inputs: dot-product kernel symmetry
    const Index ps = 2000, qs = 2000, d = 5;
    Matrix x = random_matrix(ps, d, 9300);
    for (Index i = 0; i < ps; ++i) x.row(i).normalize();
    const Matrix w = random_matrix(qs, d, 9301);
    const KernelMoments sphere = estimate_kernel_moments(SampleMatrix(x * w.transpose()));
    ck.require(std::abs(sphere.c - sphere.c_prime) <= 0.02,
               "|c - c'| = " + fmt(std::abs(sphere.c - sphere.c_prime)));
    ck.note("MC bias=" + fmt(mc_bias) + ", predicted=" + fmt(pred_naive.bias) +
            ", sphere |c-c'|=" + fmt(std::abs(sphere.c - sphere.c_prime)));
    return out;
}

// ------------------------------------------------------------ criterion 8
// Property suite, 500 randomized instances per property.
Outcome criterion_properties() {
    Outcome out;
    Check ck{out};
    std::atomic<int> failures{0};

    parallel_for(500, [&](std::ptrdiff_t inst) {
        const auto seed = static_cast<std::uint64_t>(inst);
        PhiloxStream sizes(seed, 975);
        const Index p = 5 + static_cast<Index>(sizes.next_below(8));   // 5..12
        const Index q = 2 + static_cast<Index>(sizes.next_below(9));   // 2..10
        const Matrix m = random_matrix(p, q, 30000 + seed);
        const SampleMatrix phi(m);
        int bad = 0;

        // scale invariance (exact up to ratio roundoff)
        const double g0 = estimate_dimensionality(phi, {}).value;
        const double g_scaled =
            estimate_dimensionality(SampleMatrix(Matrix(7.5 * m)), {}).value;
        if (!(rel_err(g0, g_scaled) < 1e-12) && !(std::isnan(g0) && std::isnan(g_scaled))) ++bad;

        // permutation invariance
        {
            std::vector<Index> rp(static_cast<std::size_t>(p));
            std::iota(rp.begin(), rp.end(), Index{0});
            for (Index i = p - 1; i > 0; --i) {
                std::swap(rp[static_cast<std::size_t>(i)],
                          rp[sizes.next_below(static_cast<std::uint64_t>(i) + 1)]);
            }
            Matrix pm(p, q);
            for (Index i = 0; i < p; ++i) pm.row(i) = m.row(rp[static_cast<std::size_t>(i)]);
            const TermBreakdown a = compute_terms(phi, {});
            const TermBreakdown b = compute_terms(SampleMatrix(pm), {});
            if (!(rel_err(a.t1, b.t1) < 1e-12 && rel_err(a.t2, b.t2) < 1e-12 &&
                  rel_err(a.t3, b.t3) < 1e-12 && rel_err(a.t4, b.t4) < 1e-12 &&
                  rel_err(a.t5, b.t5) < 1e-12)) {
                ++bad;
            }
        }

        // uniform-weight reduction
        {
            const WeightVector w(Vector::Constant(p, 1.75));
            const TermBreakdown a = compute_terms(phi, {});
            const TermBreakdown b = compute_terms(phi, {}, w);
            if (!(rel_err(a.t1, b.t1) < 1e-12 && rel_err(a.t5, b.t5) < 1e-12)) ++bad;
        }

        // zero-weight deletion
        if (p >= 5) {
            const Index drop = static_cast<Index>(sizes.next_below(static_cast<std::uint64_t>(p)));
            Vector w = Vector::Ones(p);
            w[drop] = 0.0;
            Matrix reduced(p - 1, q);
            Index r = 0;
            for (Index i = 0; i < p; ++i) {
                if (i != drop) reduced.row(r++) = m.row(i);
            }
            const TermBreakdown a = compute_terms(phi, {}, WeightVector(w));
            const TermBreakdown b = compute_terms(SampleMatrix(reduced), {});
            if (!(rel_err(a.t1, b.t1) < 1e-12 && rel_err(a.t5, b.t5) < 1e-12)) ++bad;
        }

        // trial1 = trial2 reduction
        {
            const TrialPair pair(phi, phi);
            const TermBreakdown a = compute_terms(phi, {});
            const TermBreakdown b = compute_terms(pair, {});
            if (!(rel_err(a.a, b.a) < 1e-12 && rel_err(a.b, b.b) < 1e-12)) ++bad;
        }

        // integer rank-1 gives exactly 1 for the corrected estimator
        {
            Vector u(p), v(q);
            bool nonconstant = false;
            for (Index i = 0; i < p; ++i) {
                u[i] = static_cast<double>(1 + static_cast<int>(sizes.next_below(5)));
                if (u[i] != u[0]) nonconstant = true;
            }
            if (!nonconstant) u[0] += 1.0;
            for (Index j = 0; j < q; ++j) {
                v[j] = static_cast<double>(static_cast<int>(sizes.next_below(7)) - 3);
            }
            if (v.cwiseAbs().sum() == 0.0) v[0] = 2.0;
            const SampleMatrix rank1(u * v.transpose());
            const DimEstimate e = estimate_dimensionality(rank1, {});
            if (!e.valid || e.value != 1.0) ++bad;
        }

        // naive centered estimate respects the rank bound
        {
            EstimatorVariant naive;
            naive.correction = Correction::naive;
            const DimEstimate e = estimate_dimensionality(phi, naive);
            const double bound =
                std::min<double>(static_cast<double>(p - 1), static_cast<double>(q)) + 1e-9;
            if (e.valid && e.value > bound) ++bad;
        }

        failures += bad;
    });

    ck.require(failures.load() == 0,
               std::to_string(failures.load()) + " property violations in 500 instances");
    return out;
}

// ------------------------------------------------------------ criterion 9
// Performance: gamma_both on a dense 5000x5000 matrix within 60 s and the
// memory of input + Gram + 50% headroom (peak RSS delta).
long read_vm_hwm_kb() {
    std::ifstream status("/proc/self/status");
    std::string line;
    while (std::getline(status, line)) {
        if (line.rfind("VmHWM:", 0) == 0) {
            long kb = 0;
            std::sscanf(line.c_str() + 6, "%ld", &kb);
            return kb;
        }
    }
    return -1;
}

Outcome criterion_performance() {
    Outcome out;
    Check ck{out};

    const Index n = 5000;
    const long before_kb = read_vm_hwm_kb();

    PopulationSpec spec;
    spec.latent_dim = 50;
    spec.noise_std = std::sqrt(0.2);
    const SampleMatrix m = generate(spec, n, n, 424242);

    const auto t0 = std::chrono::steady_clock::now();
    const DimEstimate e = estimate_dimensionality(m, {});
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const long after_kb = read_vm_hwm_kb();

    ck.require(e.valid, "estimate invalid: " + e.diagnostics);
    ck.require(std::abs(e.value - 50.0) <= 2.5, "gamma = " + fmt(e.value) + " far from 50");
    ck.require(secs <= 60.0, "runtime " + fmt(secs) + "s exceeds 60s");

    const double matrix_mb = static_cast<double>(n) * static_cast<double>(n) * 8.0 / 1048576.0;
    const double budget_mb = 1.5 * (2.0 * matrix_mb);  // input + P x P Gram, 50% headroom
    const double used_mb = static_cast<double>(after_kb - before_kb) / 1024.0;
    ck.require(before_kb > 0, "cannot read VmHWM");
    ck.require(used_mb <= budget_mb,
               "peak RSS delta " + fmt(used_mb) + " MB exceeds " + fmt(budget_mb) + " MB");
    ck.note("gamma=" + fmt(e.value) + ", " + fmt(secs) + "s, peak delta " + fmt(used_mb) +
            " MB (budget " + fmt(budget_mb) + " MB)");
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    if (argc > 1) only = std::atoi(argv[1]);

    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"oracle equivalence across all variants", criterion_oracle_equivalence},
        {"linear model d=50 recovery", criterion_linear_model},
        {"row/column sweep selectivity", criterion_selectivity},
        {"two-trial noise correction", criterion_noise_correction},
        {"local dimensionality on the noisy rff pair", criterion_local_dimensionality},
        {"joint-dimensionality identities", criterion_alignment_identities},
        {"bias prediction against Monte Carlo", criterion_bias_prediction},
        {"estimator property suite", criterion_properties},
        {"performance and memory envelope", criterion_performance},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        if (only != 0 && static_cast<int>(i + 1) != only) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = criteria[i].second();
        } catch (const std::exception& e) {
            out.pass = false;
            out.detail = std::string("exception: ") + e.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::cout << (out.pass ? "[PASS]" : "[FAIL]") << " criterion " << (i + 1) << ": "
                  << criteria[i].first << " (" << fmt(secs) << "s)";
        if (!out.detail.empty()) std::cout << " -- " << out.detail;
        std::cout << "\n" << std::flush;
        if (!out.pass) ++failures;
    }
    return failures;
}
