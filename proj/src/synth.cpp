#include "prdim/synth.hpp"

#include <cmath>
#include <numbers>

#include "prdim/philox.hpp"

namespace prdim {

namespace {

// stream ids keying independent Philox streams per role
constexpr std::uint64_t kStreamInputs = 1;
constexpr std::uint64_t kStreamFeatures = 2;
constexpr std::uint64_t kStreamPhases = 3;
constexpr std::uint64_t kStreamNoise = 4;

Matrix signal_matrix(const PopulationSpec& spec, Index p, Index q, std::uint64_t seed) {
    const Index d = spec.latent_dim;
    const CounterRng rng_x(seed, kStreamInputs);
    const CounterRng rng_w(seed, kStreamFeatures);

    Matrix x(p, d);
    for (Index i = 0; i < p; ++i) {
        for (Index k = 0; k < d; ++k) {
            x(i, k) = rng_x.normal(static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(k));
        }
    }
    Matrix w(q, d);
    for (Index a = 0; a < q; ++a) {
        for (Index k = 0; k < d; ++k) {
            w(a, k) = rng_w.normal(static_cast<std::uint64_t>(a), static_cast<std::uint64_t>(k));
        }
    }

    if (spec.kind == ModelKind::linear) {
        return x * w.transpose();
    }

    x *= spec.input_scale;
    Matrix phi = x * w.transpose();
    const CounterRng rng_b(seed, kStreamPhases);
    Vector b(q);
    for (Index a = 0; a < q; ++a) {
        b[a] = (rng_b.uniform(static_cast<std::uint64_t>(a)) - 0.5) * std::numbers::pi;
    }
    for (Index a = 0; a < q; ++a) {
        for (Index i = 0; i < p; ++i) {
            phi(i, a) = std::sin(phi(i, a) + b[a]);
        }
    }
    return phi;
}

void apply_noise(Matrix& phi, const PopulationSpec& spec, std::uint64_t seed,
                 std::uint64_t trial) {
    if (spec.noise_std == 0.0) return;
    const CounterRng rng(seed, kStreamNoise);
    for (Index a = 0; a < phi.cols(); ++a) {
        for (Index i = 0; i < phi.rows(); ++i) {
            const double eps = spec.noise_std * rng.normal(static_cast<std::uint64_t>(i),
                                                           static_cast<std::uint64_t>(a), trial);
            if (spec.noise_mode == NoiseMode::additive) {
                phi(i, a) += eps;
            } else {
                phi(i, a) *= 1.0 + eps;
            }
        }
    }
}

}  // namespace

void PopulationSpec::validate() const {
    if (latent_dim < 1) throw PreconditionError("latent_dim must be >= 1");
    if (!(input_scale > 0.0)) throw PreconditionError("input_scale must be positive");
    if (noise_std < 0.0) throw PreconditionError("noise_std must be nonnegative");
}

ModelKind model_kind_from_string(const std::string& s) {
    if (s == "linear") return ModelKind::linear;
    if (s == "rff") return ModelKind::rff;
    throw PreconditionError("unknown model kind: " + s);
}

const char* to_string(ModelKind kind) {
    return kind == ModelKind::linear ? "linear" : "rff";
}

SampleMatrix generate(const PopulationSpec& spec, Index p, Index q, std::uint64_t seed) {
    spec.validate();
    if (p < 1 || q < 1) throw PreconditionError("P and Q must be >= 1");
    Matrix phi = signal_matrix(spec, p, q, seed);
    apply_noise(phi, spec, seed, 0);
    return SampleMatrix(std::move(phi));
}

TrialPair generate_trial_pair(const PopulationSpec& spec, Index p, Index q, std::uint64_t seed) {
    spec.validate();
    if (p < 1 || q < 1) throw PreconditionError("P and Q must be >= 1");
    const Matrix signal = signal_matrix(spec, p, q, seed);
    Matrix t1 = signal;
    Matrix t2 = signal;
    apply_noise(t1, spec, seed, 0);
    apply_noise(t2, spec, seed, 1);
    return TrialPair(SampleMatrix(std::move(t1)), SampleMatrix(std::move(t2)));
}

}  // namespace prdim
