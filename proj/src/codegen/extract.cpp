#include "garden/codegen/extract.hpp"

#include <regex>

#include "garden/error.hpp"
#include "garden/util/text.hpp"

namespace garden::codegen {

namespace {

const std::regex& file_comment() {
    static const std::regex re(R"(^\s*//\s*FILE\s*:\s*(\S.*?)\s*$)", std::regex::icase);
    return re;
}

const std::regex& heading_path() {
    static const std::regex re(R"(^\s*#{2,}\s*(?:FILE\s*:\s*)?`?([^`\s]+)`?\s*$)", std::regex::icase);
    return re;
}

bool is_fence(const std::string& line) { return text::trim(line).rfind("```", 0) == 0; }

}  // namespace

std::string checked_relative_path(std::string_view raw) {
    std::string path = text::trim(raw);
    for (char& c : path) {
        if (c == '\\') c = '/';
    }
    if (path.empty()) fail(ErrorCode::PathViolation, "empty path");
    if (path.front() == '/' || (path.size() > 1 && path[1] == ':')) {
        fail(ErrorCode::PathViolation, "absolute path " + path);
    }
    std::string out;
    std::size_t start = 0;
    while (start <= path.size()) {
        auto slash = path.find('/', start);
        auto seg = path.substr(start, slash == std::string::npos ? std::string::npos : slash - start);
        if (seg == "..") fail(ErrorCode::PathViolation, "path traversal in " + path);
        if (!seg.empty() && seg != ".") {
            if (!out.empty()) out += '/';
            out += seg;
        }
        if (slash == std::string::npos) break;
        start = slash + 1;
    }
    if (out.empty()) fail(ErrorCode::PathViolation, "path has no file name: " + path);
    return out;
}

CodeBundle parse_code_files(std::string_view response_text) {
    CodeBundle bundle;
    auto lines = text::split_lines(response_text);
    std::optional<std::string> heading;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        std::smatch m;
        if (!is_fence(lines[i])) {
            if (std::regex_match(lines[i], m, heading_path())) {
                heading = m[1].str();
            } else if (!text::trim(lines[i]).empty()) {
                heading.reset();
            }
            continue;
        }
        // Opening fence: collect until the closing fence.
        std::size_t j = i + 1;
        std::vector<std::string> body;
        while (j < lines.size() && !is_fence(lines[j])) body.push_back(lines[j++]);
        i = j;

        std::optional<std::string> path;
        std::size_t first = 0;
        while (first < body.size() && text::trim(body[first]).empty()) ++first;
        if (first < body.size() && std::regex_match(body[first], m, file_comment())) {
            path = m[1].str();
            body.erase(body.begin(), body.begin() + static_cast<std::ptrdiff_t>(first) + 1);
        } else if (heading) {
            path = heading;
        }
        heading.reset();
        if (!path) continue;
        bundle.files[checked_relative_path(*path)] = text::join(body, "\n") + "\n";
    }
    if (bundle.files.empty()) fail(ErrorCode::NoFilesFound, "no annotated code blocks in response");
    return bundle;
}

std::optional<ParsedVerdict> parse_verdict(std::string_view evaluator_output) {
    static const std::regex re(R"(^[\s*#>_`-]*VERDICT[\s*_`]*:[\s*_`]*(PASS|FAIL)\b.*$)", std::regex::icase);
    auto lines = text::split_lines(evaluator_output);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        std::smatch m;
        if (!std::regex_match(lines[i], m, re)) continue;
        ParsedVerdict out;
        out.verdict = text::iequals(m[1].str(), "PASS") ? Verdict::Pass : Verdict::Fail;
        std::vector<std::string> rest(lines.begin(), lines.begin() + static_cast<std::ptrdiff_t>(i));
        rest.insert(rest.end(), lines.begin() + static_cast<std::ptrdiff_t>(i) + 1, lines.end());
        out.feedback = text::trim(text::join(rest, "\n"));
        return out;
    }
    return std::nullopt;
}

}  // namespace garden::codegen
