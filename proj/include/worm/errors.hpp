#pragma once

#include <stdexcept>
#include <string>

namespace worm {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define WORM_DEFINE_ERROR(Name)                                        \
    struct Name : Error {                                              \
        explicit Name(const std::string& msg) : Error(#Name ": " + msg) {} \
    }

// graph construction
WORM_DEFINE_ERROR(DisconnectedGraph);
WORM_DEFINE_ERROR(SelfLoop);
WORM_DEFINE_ERROR(DuplicateEdge);
WORM_DEFINE_ERROR(BadLabel);
WORM_DEFINE_ERROR(EmptyEdgeSet);
WORM_DEFINE_ERROR(BadDimension);
WORM_DEFINE_ERROR(ParseError);

// state space
WORM_DEFINE_ERROR(LeavesStateSpace);
WORM_DEFINE_ERROR(NotInW);

// oracles and verification
WORM_DEFINE_ERROR(TooLarge);
WORM_DEFINE_ERROR(CrossCheckMismatch);
WORM_DEFINE_ERROR(BoundViolation);
WORM_DEFINE_ERROR(BijectionViolation);
WORM_DEFINE_ERROR(MismatchReport);
WORM_DEFINE_ERROR(InternalInvariant);

// spectral
WORM_DEFINE_ERROR(NotIrreducible);
WORM_DEFINE_ERROR(IterationCap);

// canonical paths
WORM_DEFINE_ERROR(TransitionNotOnPath);
WORM_DEFINE_ERROR(NotInImage);

// estimators
WORM_DEFINE_ERROR(BadTolerance);
WORM_DEFINE_ERROR(ZeroSampleFraction);
WORM_DEFINE_ERROR(DistanceExceedsK);

#undef WORM_DEFINE_ERROR

}  // namespace worm
