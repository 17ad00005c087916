#pragma once

#include <cstdint>

#include "prdim/types.hpp"

namespace prdim {

enum class ModelKind { linear, rff };
enum class NoiseMode { additive, multiplicative };

// A generative process with known ground-truth dimensionality: either the
// noisy linear model phi = x.w + eps with standard-normal latents, or the
// random Fourier feature model phi = sin(x.w + b) + eps whose kernel tends
// to an RBF. In the noise-free infinite-sample limit both have effective
// dimension equal to the latent dimension (globally for linear, locally
// for rff).
struct PopulationSpec {
    ModelKind kind = ModelKind::linear;
    int latent_dim = 1;
    double input_scale = 1.0;  // sigma_x; rff only, linear latents are unit variance
    double noise_std = 0.0;
    NoiseMode noise_mode = NoiseMode::additive;

    double ground_truth_dim() const { return static_cast<double>(latent_dim); }
    void validate() const;
};

ModelKind model_kind_from_string(const std::string& s);
const char* to_string(ModelKind kind);

// Deterministic given (spec, P, Q, seed); entries are addressed by their
// grid position through a counter-based generator, so a generated matrix
// is independent of generation order and nests inside larger draws with
// the same seed.
SampleMatrix generate(const PopulationSpec& spec, Index p, Index q, std::uint64_t seed);

// Same signal draw (x, w, b), independent noise per trial.
TrialPair generate_trial_pair(const PopulationSpec& spec, Index p, Index q, std::uint64_t seed);

}  // namespace prdim
