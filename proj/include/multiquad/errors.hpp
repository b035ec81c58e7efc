#pragma once

#include <stdexcept>
#include <string>

namespace multiquad {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// measure providers
struct OutOfTable : Error { using Error::Error; };
struct UnknownFormula : Error { using Error::Error; };

// polynomial construction
struct NotNormal : Error { using Error::Error; };
struct SingularSystem : Error { using Error::Error; };
struct ZeroPivot : Error { using Error::Error; };

// eigen solving
struct QRNoConvergence : Error { using Error::Error; };
struct ResidualTooLarge : Error { using Error::Error; };
struct NoValidIndex : Error { using Error::Error; };

// kernel / weight consistency
struct FormulaMismatch : Error { using Error::Error; };
struct DuplicateNodes : Error { using Error::Error; };
struct DegenerateInnerProduct : Error { using Error::Error; };
struct WeightMismatch : Error { using Error::Error; };
struct ComplexNodes : Error { using Error::Error; };
struct SingularTriangular : Error { using Error::Error; };

// cli / io
struct BadInput : Error { using Error::Error; };

} // namespace multiquad
