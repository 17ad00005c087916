#include "prdim/sweep.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>

#include "prdim/estimator.hpp"
#include "prdim/parallel.hpp"
#include "prdim/philox.hpp"

namespace prdim {

namespace {

constexpr std::uint64_t kStreamSubsample = 11;
constexpr std::uint64_t kStreamCellSeed = 12;

// first `take` entries of a partial Fisher-Yates shuffle of 0..n-1,
// reported in ascending order (a uniform subset either way; the full-size
// draw then reduces to the identity and matches direct estimation exactly)
std::vector<Index> draw_without_replacement(Index n, Index take, PhiloxStream& stream) {
    std::vector<Index> pool(static_cast<std::size_t>(n));
    std::iota(pool.begin(), pool.end(), Index{0});
    for (Index t = 0; t < take; ++t) {
        const auto j = t + static_cast<Index>(stream.next_below(static_cast<std::uint64_t>(n - t)));
        std::swap(pool[static_cast<std::size_t>(t)], pool[static_cast<std::size_t>(j)]);
    }
    pool.resize(static_cast<std::size_t>(take));
    std::sort(pool.begin(), pool.end());
    return pool;
}

Matrix submatrix(const Matrix& m, const std::vector<Index>& rows,
                 const std::vector<Index>& cols) {
    Matrix out(static_cast<Index>(rows.size()), static_cast<Index>(cols.size()));
    for (Index j = 0; j < out.cols(); ++j) {
        for (Index i = 0; i < out.rows(); ++i) {
            out(i, j) = m(rows[static_cast<std::size_t>(i)], cols[static_cast<std::size_t>(j)]);
        }
    }
    return out;
}

SweepResult sweep_impl(const Matrix& m1, const Matrix* m2, const SweepGrid& grid,
                       const std::vector<Correction>& corrections, Centering centering,
                       int threads) {
    if (grid.p_values.empty() || grid.q_values.empty()) {
        throw PreconditionError("sweep grid is empty");
    }
    if (grid.repetitions < 1) throw PreconditionError("repetitions must be >= 1");
    if (corrections.empty()) throw PreconditionError("no corrections requested");
    for (const Index p : grid.p_values) {
        if (p < 1 || p > m1.rows()) throw GridExceedsData("grid P exceeds the data rows");
    }
    for (const Index q : grid.q_values) {
        if (q < 1 || q > m1.cols()) throw GridExceedsData("grid Q exceeds the data columns");
    }

    const std::size_t n_cells = grid.p_values.size() * grid.q_values.size() *
                                static_cast<std::size_t>(grid.repetitions);
    const std::size_t n_corr = corrections.size();

    SweepResult result;
    result.grid = grid;
    result.corrections = corrections;
    result.centering = centering;
    result.noise_corrected = m2 != nullptr;
    result.records.resize(n_cells * n_corr);

    parallel_for(
        static_cast<std::ptrdiff_t>(n_cells),
        [&](std::ptrdiff_t cell) {
            const auto reps = static_cast<std::size_t>(grid.repetitions);
            const std::size_t rep = static_cast<std::size_t>(cell) % reps;
            const std::size_t flat = static_cast<std::size_t>(cell) / reps;
            const std::size_t qi = flat % grid.q_values.size();
            const std::size_t pi = flat / grid.q_values.size();
            const Index p_take = grid.p_values[pi];
            const Index q_take = grid.q_values[qi];

            const auto t0 = std::chrono::steady_clock::now();
            PhiloxStream stream(grid.base_seed, kStreamSubsample, static_cast<std::uint64_t>(flat),
                                static_cast<std::uint64_t>(rep));
            const std::vector<Index> rows = draw_without_replacement(m1.rows(), p_take, stream);
            const std::vector<Index> cols = draw_without_replacement(m1.cols(), q_take, stream);
            const std::uint64_t cell_seed =
                Philox4x64::block({static_cast<std::uint64_t>(flat),
                                   static_cast<std::uint64_t>(rep), 0, 0},
                                  {grid.base_seed, kStreamCellSeed})[0];

            EstimatorVariant variant;
            variant.centering = centering;
            std::vector<DimEstimate> estimates;
            estimates.reserve(n_corr);
            if (m2 == nullptr) {
                const TermEngine engine(SampleMatrix(submatrix(m1, rows, cols)), variant);
                for (const Correction c : corrections) estimates.push_back(engine.estimate(c));
            } else {
                const TrialPair sub(SampleMatrix(submatrix(m1, rows, cols)),
                                    SampleMatrix(submatrix(*m2, rows, cols)));
                const TermEngine engine(sub, variant);
                for (const Correction c : corrections) estimates.push_back(engine.estimate(c));
            }
            const auto t1 = std::chrono::steady_clock::now();
            const double ms =
                std::chrono::duration<double, std::milli>(t1 - t0).count() /
                static_cast<double>(n_corr);

            for (std::size_t k = 0; k < n_corr; ++k) {
                SweepRecord& rec = result.records[static_cast<std::size_t>(cell) * n_corr + k];
                rec.p = p_take;
                rec.q = q_take;
                rec.repetition = static_cast<int>(rep);
                rec.cell_seed = cell_seed;
                rec.estimate = estimates[k];
                rec.wall_ms = ms;
            }
        },
        threads);
    return result;
}

}  // namespace

SweepResult subsample_sweep(const SampleMatrix& phi, const SweepGrid& grid,
                            const std::vector<Correction>& corrections, Centering centering,
                            int threads) {
    return sweep_impl(phi.values(), nullptr, grid, corrections, centering, threads);
}

SweepResult subsample_sweep(const TrialPair& pair, const SweepGrid& grid,
                            const std::vector<Correction>& corrections, Centering centering,
                            int threads) {
    return sweep_impl(pair.trial1().values(), &pair.trial2().values(), grid, corrections,
                      centering, threads);
}

}  // namespace prdim
