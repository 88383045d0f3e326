#include "garden/error.hpp"

namespace garden {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::SeedAlreadyExists: return "SeedAlreadyExists";
        case ErrorCode::EmptyText: return "EmptyText";
        case ErrorCode::UnknownParent: return "UnknownParent";
        case ErrorCode::UnknownNode: return "UnknownNode";
        case ErrorCode::KindViolation: return "KindViolation";
        case ErrorCode::LeafViolation: return "LeafViolation";
        case ErrorCode::PreconditionViolation: return "PreconditionViolation";
        case ErrorCode::InvalidConfig: return "InvalidConfig";
        case ErrorCode::ParseFailure: return "ParseFailure";
        case ErrorCode::UnknownSubmodule: return "UnknownSubmodule";
        case ErrorCode::TransportError: return "TransportError";
        case ErrorCode::AuthError: return "AuthError";
        case ErrorCode::ProviderRefusal: return "ProviderRefusal";
        case ErrorCode::ScriptExhausted: return "ScriptExhausted";
        case ErrorCode::ScriptMismatch: return "ScriptMismatch";
        case ErrorCode::NoVisionCapability: return "NoVisionCapability";
        case ErrorCode::NoFilesFound: return "NoFilesFound";
        case ErrorCode::PathViolation: return "PathViolation";
        case ErrorCode::NoLayoutFound: return "NoLayoutFound";
        case ErrorCode::MalformedLayout: return "MalformedLayout";
        case ErrorCode::EmptyIndex: return "EmptyIndex";
        case ErrorCode::EmbeddingProviderError: return "EmbeddingProviderError";
        case ErrorCode::FetchError: return "FetchError";
        case ErrorCode::AdapterError: return "AdapterError";
        case ErrorCode::DuplicateAssetId: return "DuplicateAssetId";
        case ErrorCode::MissingFile: return "MissingFile";
        case ErrorCode::ToolchainMissing: return "ToolchainMissing";
        case ErrorCode::LaunchFailure: return "LaunchFailure";
        case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
        case ErrorCode::ScenarioExhausted: return "ScenarioExhausted";
        case ErrorCode::EngineUnavailable: return "EngineUnavailable";
        case ErrorCode::InvalidTarget: return "InvalidTarget";
        case ErrorCode::SnapshotMissing: return "SnapshotMissing";
        case ErrorCode::CorruptDocument: return "CorruptDocument";
        case ErrorCode::VersionMismatch: return "VersionMismatch";
        case ErrorCode::SequenceGap: return "SequenceGap";
        case ErrorCode::UnknownBackup: return "UnknownBackup";
        case ErrorCode::ConflictingIds: return "ConflictingIds";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

}  // namespace garden
