#pragma once

#include <stdexcept>
#include <string>

namespace curator {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// File / document errors
struct ParseError : Error { using Error::Error; };       // malformed document
struct SchemaError : Error { using Error::Error; };      // missing field, wrong type, wrong arity
struct ValidationError : Error { using Error::Error; };  // invariant violation
struct IoError : Error { using Error::Error; };

// Numeric / contract errors
struct BoundsError : Error { using Error::Error; };
struct EmptyInput : Error { using Error::Error; };
struct InsufficientHistory : Error { using Error::Error; };
struct InvalidTimestep : Error { using Error::Error; };
struct NoLaneError : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };
struct TooFewModels : Error { using Error::Error; };
struct CorpusTooSmall : Error { using Error::Error; };
struct MissingScores : Error { using Error::Error; };
struct SpecError : Error { using Error::Error; };
struct PolicyError : Error { using Error::Error; };

// Pipeline errors
struct ConfigError : Error { using Error::Error; };
struct DependencyError : Error { using Error::Error; };
struct DataError : Error { using Error::Error; };

}  // namespace curator
