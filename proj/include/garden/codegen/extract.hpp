#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "garden/core/types.hpp"

namespace garden::codegen {

// Collects fenced blocks annotated with a path, either by a `// FILE: <path>`
// first line inside the fence or a `### <path>` line right before it.
// Throws NoFilesFound or PathViolation.
CodeBundle parse_code_files(std::string_view response_text);

// Normalizes a bundle path; throws PathViolation for absolute paths or `..`.
std::string checked_relative_path(std::string_view path);

struct ParsedVerdict {
    Verdict verdict;
    std::string feedback;
};

// First line of the form `VERDICT: PASS|FAIL`; the remaining text is feedback.
std::optional<ParsedVerdict> parse_verdict(std::string_view evaluator_output);

}  // namespace garden::codegen
