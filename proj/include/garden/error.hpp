#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace garden {

enum class ErrorCode {
    SeedAlreadyExists,
    EmptyText,
    UnknownParent,
    UnknownNode,
    KindViolation,
    LeafViolation,
    PreconditionViolation,
    InvalidConfig,
    ParseFailure,
    UnknownSubmodule,
    TransportError,
    AuthError,
    ProviderRefusal,
    ScriptExhausted,
    ScriptMismatch,
    NoVisionCapability,
    NoFilesFound,
    PathViolation,
    NoLayoutFound,
    MalformedLayout,
    EmptyIndex,
    EmbeddingProviderError,
    FetchError,
    AdapterError,
    DuplicateAssetId,
    MissingFile,
    ToolchainMissing,
    LaunchFailure,
    UnsupportedFormat,
    ScenarioExhausted,
    EngineUnavailable,
    InvalidTarget,
    SnapshotMissing,
    CorruptDocument,
    VersionMismatch,
    SequenceGap,
    UnknownBackup,
    ConflictingIds,
    IoError,
};

std::string_view to_string(ErrorCode code);

// Single exception type for the engine; callers branch on code().
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

// Errors from scripted test doubles mean the script is wrong, not that the
// operation failed; they propagate instead of becoming feedback.
inline bool is_script_error(ErrorCode code) {
    return code == ErrorCode::ScriptExhausted || code == ErrorCode::ScriptMismatch ||
           code == ErrorCode::ScenarioExhausted;
}

}  // namespace garden
