#include "bcszk/errors.hpp"

namespace bcszk {

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::UnknownVariable: return "UnknownVariable";
        case ErrorCode::EmptyResult: return "EmptyResult";
        case ErrorCode::TooLarge: return "TooLarge";
        case ErrorCode::FormatError: return "FormatError";
        case ErrorCode::DistributionError: return "DistributionError";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::MissingTable: return "MissingTable";
        case ErrorCode::InvalidMeasurement: return "InvalidMeasurement";
        case ErrorCode::MissingSubdivision: return "MissingSubdivision";
        case ErrorCode::NotSatisfying: return "NotSatisfying";
        case ErrorCode::DomainMismatch: return "DomainMismatch";
        case ErrorCode::PlanInvalid: return "PlanInvalid";
        case ErrorCode::NotSynchronous: return "NotSynchronous";
        case ErrorCode::HomInvalid: return "HomInvalid";
        case ErrorCode::UnboundVariable: return "UnboundVariable";
        case ErrorCode::InvalidCode: return "InvalidCode";
        case ErrorCode::NotRecognizing: return "NotRecognizing";
        case ErrorCode::NonPositiveDistribution: return "NonPositiveDistribution";
        case ErrorCode::BudgetExceeded: return "BudgetExceeded";
        case ErrorCode::NoSatisfyingAssignment: return "NoSatisfyingAssignment";
        case ErrorCode::TransportError: return "TransportError";
        case ErrorCode::ProtocolViolation: return "ProtocolViolation";
        case ErrorCode::UsageError: return "UsageError";
    }
    return "Error";
}

Limits& default_limits() {
    static Limits limits;
    return limits;
}

}  // namespace bcszk
