#pragma once

#include <stdexcept>
#include <string>

namespace dyncade {

enum class ErrorCode {
    Ok = 0,
    // graph updates
    MissingVertex,
    DuplicateVertex,
    DuplicateEdge,
    MissingEdge,
    SelfLoop,
    DegreeExceeded,
    // query parsing / validation
    SyntaxError,
    UnboundVariable,
    DuplicateName,
    ComponentMismatch,
    RadiusExceeded,
    TauClash,
    NonContiguousGroups,
    MixedClauseRadii,
    // answering
    ArityMismatch,
    StaleCursor,
    RadiusTooLarge,
    // skip index
    TupleNotInList,
    DuplicateTuple,
    // counting
    MissingLeafCount,
    // misc
    InvalidArgument,
    Io,
    Internal,
};

const char* error_code_name(ErrorCode c);

class EngineError : public std::runtime_error {
public:
    EngineError(ErrorCode code, std::string message, int line = 0, int col = 0)
        : std::runtime_error(std::move(message)), code_(code), line_(line), col_(col) {}

    ErrorCode code() const noexcept { return code_; }
    int line() const noexcept { return line_; }
    int col() const noexcept { return col_; }

private:
    ErrorCode code_;
    int line_;
    int col_;
};

[[noreturn]] inline void fail(ErrorCode code, std::string message, int line = 0, int col = 0) {
    throw EngineError(code, std::move(message), line, col);
}

}  // namespace dyncade
