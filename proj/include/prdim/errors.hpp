#pragma once

#include <stdexcept>
#include <string>

namespace prdim {

// Error taxonomy. The three bases map onto CLI exit codes:
// InputError -> 2, PreconditionError -> 3, NumericalError -> 4.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PreconditionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : InputError {
    using InputError::InputError;
};

struct NonFiniteEntry : InputError {
    using InputError::InputError;
};

struct NotTwoDimensional : InputError {
    using InputError::InputError;
};

struct IoError : InputError {
    using InputError::InputError;
};

struct NonFiniteInput : PreconditionError {
    using PreconditionError::PreconditionError;
};

struct InsufficientRows : PreconditionError {
    using PreconditionError::PreconditionError;
};

struct InsufficientColumns : PreconditionError {
    using PreconditionError::PreconditionError;
};

struct FeatureAxisTooSmall : PreconditionError {
    using PreconditionError::PreconditionError;
};

struct DegenerateWeights : PreconditionError {
    using PreconditionError::PreconditionError;
};

struct MatrixTooLargeForOracle : PreconditionError {
    using PreconditionError::PreconditionError;
};

struct RowCountMismatch : PreconditionError {
    using PreconditionError::PreconditionError;
};

struct GridExceedsData : PreconditionError {
    using PreconditionError::PreconditionError;
};

struct DuplicatePoints : PreconditionError {
    using PreconditionError::PreconditionError;
};

struct AllBallsDegenerate : NumericalError {
    using NumericalError::NumericalError;
};

struct DegenerateKernel : NumericalError {
    using NumericalError::NumericalError;
};

struct NoValidRecords : NumericalError {
    using NumericalError::NumericalError;
};

}  // namespace prdim
