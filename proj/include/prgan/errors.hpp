#ifndef PRGAN_ERRORS_HPP
#define PRGAN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace prgan {

// Base for all library errors so callers can catch one type at the CLI edge.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define PRGAN_DEFINE_ERROR(NAME)                                   \
    struct NAME : Error {                                          \
        explicit NAME(const std::string& msg) : Error(msg) {}      \
    }

// core
PRGAN_DEFINE_ERROR(TooFewRecords);
PRGAN_DEFINE_ERROR(OutOfRange);
PRGAN_DEFINE_ERROR(SchemaMismatch);
PRGAN_DEFINE_ERROR(MissingCoordinates);
PRGAN_DEFINE_ERROR(TooFewPoints);

// models
PRGAN_DEFINE_ERROR(UnknownArchitecture);
PRGAN_DEFINE_ERROR(Divergence);
PRGAN_DEFINE_ERROR(EmptyEvaluationSet);
PRGAN_DEFINE_ERROR(UnshapedLayer);

// gan
PRGAN_DEFINE_ERROR(FrozenModelMutated);
PRGAN_DEFINE_ERROR(ShapeMismatch);
PRGAN_DEFINE_ERROR(NoFeasibleCandidate);

// baselines
PRGAN_DEFINE_ERROR(WrongKind);
PRGAN_DEFINE_ERROR(NoFeasibleEpsilon);

// theory
PRGAN_DEFINE_ERROR(SupportMismatch);
PRGAN_DEFINE_ERROR(NotBalanced);
PRGAN_DEFINE_ERROR(EmptyJointSupport);
PRGAN_DEFINE_ERROR(AccuracyPreconditionUnmet);

// cli / eval
PRGAN_DEFINE_ERROR(MissingArtifact);

#undef PRGAN_DEFINE_ERROR

}  // namespace prgan

#endif
