#pragma once

#include <stdexcept>
#include <string>

namespace frif {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NonInjectiveMap : Error { using Error::Error; };
struct EmptyFamily : Error { using Error::Error; };
struct DomainError : Error { using Error::Error; };
struct EvalError : Error { using Error::Error; };
struct ShapeMismatch : Error { using Error::Error; };
struct PartitionGap : Error { using Error::Error; };
struct NotContractive : Error { using Error::Error; };
struct MaxIterations : Error { using Error::Error; };
struct DegenerateScale : Error { using Error::Error; };
struct UnsortedData : Error { using Error::Error; };
struct ScaleTooLarge : Error { using Error::Error; };
struct InconsistentJoinUp : Error { using Error::Error; };
struct UnknownName : Error { using Error::Error; };
struct EndpointMismatch : Error { using Error::Error; };
struct ZeroDivisor : Error { using Error::Error; };
struct NotAVector : Error { using Error::Error; };
struct BadAxis : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };
struct SemanticError : Error { using Error::Error; };

// Exact-arithmetic path refused the input (misaligned nodes, irrational
// coefficients, or intermediate overflow).
struct ExactUnavailable : Error { using Error::Error; };

// Parse failures carry a position; column counts from 1.
struct ParseError : Error {
    int line = 1;
    int column = 1;
    ParseError(const std::string& msg, int line_, int column_)
        : Error(msg + " (line " + std::to_string(line_) + ", column " +
                std::to_string(column_) + ")"),
          line(line_), column(column_) {}
};

}  // namespace frif
