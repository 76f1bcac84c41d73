#pragma once

#include <stdexcept>
#include <string>

namespace bcszk {

enum class ErrorCode {
    UnknownVariable,
    EmptyResult,
    TooLarge,
    FormatError,
    DistributionError,
    DimensionMismatch,
    MissingTable,
    InvalidMeasurement,
    MissingSubdivision,
    NotSatisfying,
    DomainMismatch,
    PlanInvalid,
    NotSynchronous,
    HomInvalid,
    UnboundVariable,
    InvalidCode,
    NotRecognizing,
    NonPositiveDistribution,
    BudgetExceeded,
    NoSatisfyingAssignment,
    TransportError,
    ProtocolViolation,
    UsageError,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

    ErrorCode code() const { return code_; }

  private:
    ErrorCode code_;
};

#define BCSZK_DEFINE_ERROR(Name)                                                                   \
    class Name : public Error {                                                                    \
      public:                                                                                      \
        explicit Name(const std::string& what) : Error(ErrorCode::Name, what) {}                   \
    }

BCSZK_DEFINE_ERROR(UnknownVariable);
BCSZK_DEFINE_ERROR(EmptyResult);
BCSZK_DEFINE_ERROR(TooLarge);
BCSZK_DEFINE_ERROR(FormatError);
BCSZK_DEFINE_ERROR(DistributionError);
BCSZK_DEFINE_ERROR(DimensionMismatch);
BCSZK_DEFINE_ERROR(MissingTable);
BCSZK_DEFINE_ERROR(InvalidMeasurement);
BCSZK_DEFINE_ERROR(MissingSubdivision);
BCSZK_DEFINE_ERROR(NotSatisfying);
BCSZK_DEFINE_ERROR(DomainMismatch);
BCSZK_DEFINE_ERROR(PlanInvalid);
BCSZK_DEFINE_ERROR(NotSynchronous);
BCSZK_DEFINE_ERROR(HomInvalid);
BCSZK_DEFINE_ERROR(UnboundVariable);
BCSZK_DEFINE_ERROR(InvalidCode);
BCSZK_DEFINE_ERROR(NotRecognizing);
BCSZK_DEFINE_ERROR(NonPositiveDistribution);
BCSZK_DEFINE_ERROR(BudgetExceeded);
BCSZK_DEFINE_ERROR(NoSatisfyingAssignment);
BCSZK_DEFINE_ERROR(TransportError);
BCSZK_DEFINE_ERROR(ProtocolViolation);
BCSZK_DEFINE_ERROR(UsageError);

#undef BCSZK_DEFINE_ERROR

// Global knobs for enumeration and search guards. Callers may pass explicit
// overrides; these are the defaults referenced throughout.
struct Limits {
    // Constraints on more than this many boolean variables are not enumerated.
    int enumeration_bound_vars = 20;
    // Cap on exhaustive strategy-search spaces (number of evaluations).
    unsigned long long search_bound = 100'000'000ULL;
    // Cap on seed-space sizes in the exact-distribution oracle.
    unsigned long long oracle_budget = 100'000'000ULL;
};

Limits& default_limits();

}  // namespace bcszk
