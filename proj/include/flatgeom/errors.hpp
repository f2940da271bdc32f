#pragma once

#include <stdexcept>
#include <string>

namespace flatgeom {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Input file or JSON does not match the expected schema.
struct ParseError : Error {
    using Error::Error;
};

// Surface (or family/model) violates a structural invariant.
struct ValidationError : Error {
    using Error::Error;
};

// A separatrix failed to close up within the configured crossing bound.
struct StepBoundExceeded : Error {
    using Error::Error;
};

// Family has an edge schedule with a 1/eps term; auto collapse refuses.
struct DivergentEdge : Error {
    using Error::Error;
};

// Large-modulus cylinders from different directions overlap.
struct DisjointnessViolation : Error {
    using Error::Error;
};

// A cylinder handle is used against a surface it was not computed from.
struct StaleCylinder : Error {
    using Error::Error;
};

} // namespace flatgeom
