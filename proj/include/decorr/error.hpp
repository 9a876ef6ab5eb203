#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace decorr {

enum class ErrorCode {
    InvalidSchema,
    BadAssignment,
    DuplicateCell,
    NegativeMass,
    NotNormalized,
    EmptyKeepSet,
    OverlappingAxes,
    SameAxis,
    SchemaMismatch,
    InfiniteDivergence,
    BadScope,
    EmptyScopeCellSchema,
    Infeasible,
    InstanceTooLarge,
    EmptyDataset,
    EmptyFile,
    MissingColumn,
    UnknownLevel,
    RaggedRow,
    InvalidTable,
    BadPolicy,
    InvalidArgument,
    ParseError,
    IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

// All library failures surface as decorr::Error; code() identifies the contract
// that was violated.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace decorr
