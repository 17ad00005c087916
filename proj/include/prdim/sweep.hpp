#pragma once

#include <cstdint>
#include <vector>

#include "prdim/types.hpp"

namespace prdim {

struct SweepGrid {
    std::vector<Index> p_values;
    std::vector<Index> q_values;
    int repetitions = 1;
    std::uint64_t base_seed = 0;
};

struct SweepRecord {
    Index p = 0;
    Index q = 0;
    int repetition = 0;
    std::uint64_t cell_seed = 0;
    DimEstimate estimate;
    double wall_ms = 0.0;
};

struct SweepResult {
    SweepGrid grid;
    std::vector<Correction> corrections;
    Centering centering = Centering::task;
    bool noise_corrected = false;
    std::vector<SweepRecord> records;  // grid order: p, q, repetition, correction
};

// Random submatrix sweep: per (P, Q, repetition) cell, rows and columns are
// drawn uniformly without replacement (a fresh draw per repetition, the
// same draw for every requested correction), and the estimates are
// recorded whether valid or not. Deterministic given the base seed, for
// any thread count.
SweepResult subsample_sweep(const SampleMatrix& phi, const SweepGrid& grid,
                            const std::vector<Correction>& corrections,
                            Centering centering = Centering::task, int threads = 0);
SweepResult subsample_sweep(const TrialPair& pair, const SweepGrid& grid,
                            const std::vector<Correction>& corrections,
                            Centering centering = Centering::task, int threads = 0);

}  // namespace prdim
