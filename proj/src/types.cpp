#include "prdim/types.hpp"

namespace prdim {

SampleMatrix::SampleMatrix(Matrix values) : values_(std::move(values)) {
    if (values_.rows() < 1 || values_.cols() < 1) {
        throw PreconditionError("sample matrix needs at least one row and one column");
    }
    if (!values_.allFinite()) {
        throw NonFiniteInput("sample matrix contains NaN or infinite entries");
    }
}

TrialPair::TrialPair(SampleMatrix trial1, SampleMatrix trial2)
    : trial1_(std::move(trial1)), trial2_(std::move(trial2)) {
    if (trial1_.rows() != trial2_.rows() || trial1_.cols() != trial2_.cols()) {
        throw PreconditionError("trial matrices must have identical shapes");
    }
}

WeightVector::WeightVector(Vector weights) : weights_(std::move(weights)) {
    if (weights_.size() < 4) {
        throw DegenerateWeights("weight vector needs at least 4 entries");
    }
    Index positive = 0;
    for (Index i = 0; i < weights_.size(); ++i) {
        const double w = weights_[i];
        if (!std::isfinite(w) || w < 0.0) {
            throw DegenerateWeights("weights must be finite and nonnegative");
        }
        if (w > 0.0) ++positive;
    }
    if (positive < 4) {
        throw DegenerateWeights("at least 4 weights must be strictly positive");
    }
}

const char* to_string(Correction c) {
    switch (c) {
        case Correction::naive: return "naive";
        case Correction::row: return "row";
        case Correction::col: return "col";
        case Correction::both: return "both";
    }
    return "?";
}

const char* to_string(Centering c) {
    switch (c) {
        case Centering::task: return "task";
        case Centering::neuron: return "neuron";
        case Centering::none: return "none";
    }
    return "?";
}

Correction correction_from_string(const std::string& s) {
    if (s == "naive") return Correction::naive;
    if (s == "row") return Correction::row;
    if (s == "col") return Correction::col;
    if (s == "both") return Correction::both;
    throw PreconditionError("unknown correction: " + s);
}

Centering centering_from_string(const std::string& s) {
    if (s == "task") return Centering::task;
    if (s == "neuron") return Centering::neuron;
    if (s == "none") return Centering::none;
    throw PreconditionError("unknown centering: " + s);
}

}  // namespace prdim
