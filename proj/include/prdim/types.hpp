#pragma once

#include <Eigen/Core>

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>

#include "prdim/errors.hpp"

namespace prdim {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// Dense P x Q activation matrix. Rows index stimuli, columns index units.
// Construction rejects non-finite entries and empty axes.
class SampleMatrix {
  public:
    explicit SampleMatrix(Matrix values);

    const Matrix& values() const { return values_; }
    Index rows() const { return values_.rows(); }
    Index cols() const { return values_.cols(); }

  private:
    Matrix values_;
};

// Two recordings of the same stimuli x units grid with independent noise.
class TrialPair {
  public:
    TrialPair(SampleMatrix trial1, SampleMatrix trial2);

    const SampleMatrix& trial1() const { return trial1_; }
    const SampleMatrix& trial2() const { return trial2_; }
    Index rows() const { return trial1_.rows(); }
    Index cols() const { return trial1_.cols(); }

  private:
    SampleMatrix trial1_;
    SampleMatrix trial2_;
};

// Per-row nonnegative scaling factors. The estimator needs four distinct
// sample indices, so at least four weights must be strictly positive.
class WeightVector {
  public:
    explicit WeightVector(Vector weights);

    const Vector& weights() const { return weights_; }
    Index size() const { return weights_.size(); }

  private:
    Vector weights_;
};

enum class Correction { naive, row, col, both };

enum class Centering { task, neuron, none };

// Which estimator to compute. `correction` always refers to the original
// data axes: `row` corrects stimulus-sampling bias, `col` corrects
// unit-sampling bias, under every centering mode. `centering` selects the
// axis the four-index tensor is built on (task: stimuli, neuron: units,
// none: stimuli with the uncentered ratio t1/t3).
struct EstimatorVariant {
    Correction correction = Correction::both;
    Centering centering = Centering::task;
    bool noise_corrected = false;
    // Average the two trial orderings of the cross-trial product. Off by
    // default: the single ordering (1,2,1,2) is the reference convention.
    bool symmetrize_trials = false;

    friend bool operator==(const EstimatorVariant&, const EstimatorVariant&) = default;
};

// The five unbiased term estimates and the assembled numerator/denominator.
// For centered modes A = t1 - 2 t2 + t5 and B = t3 - 2 t4 + t5; with
// centering none, A = t1 and B = t3 (t2, t4, t5 still reported).
struct TermBreakdown {
    double t1 = 0.0;
    double t2 = 0.0;
    double t3 = 0.0;
    double t4 = 0.0;
    double t5 = 0.0;
    double a = 0.0;
    double b = 0.0;
};

struct DimEstimate {
    double value = std::numeric_limits<double>::quiet_NaN();
    EstimatorVariant variant;
    TermBreakdown terms;
    bool valid = false;
    std::string diagnostics;
};

const char* to_string(Correction c);
const char* to_string(Centering c);
Correction correction_from_string(const std::string& s);
Centering centering_from_string(const std::string& s);

}  // namespace prdim
