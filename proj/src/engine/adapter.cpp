#include "garden/engine/adapter.hpp"

#include <algorithm>
#include <regex>

#include "garden/error.hpp"
#include "garden/util/text.hpp"

namespace garden::engine {

std::string_view to_string(RunOutcome o) {
    switch (o) {
        case RunOutcome::Ran: return "Ran";
        case RunOutcome::PlacementError: return "PlacementError";
        case RunOutcome::Crashed: return "Crashed";
    }
    return "?";
}

void RunReport::validate() const {
    switch (outcome) {
        case RunOutcome::Ran:
            if (screenshots.size() != static_cast<std::size_t>(kScreenshotCount)) {
                fail(ErrorCode::PreconditionViolation,
                     "run produced " + std::to_string(screenshots.size()) + " screenshots");
            }
            break;
        case RunOutcome::Crashed:
            if (!crash_log) fail(ErrorCode::PreconditionViolation, "crash without crash log");
            break;
        case RunOutcome::PlacementError:
            if (!placement_log_excerpt) fail(ErrorCode::PreconditionViolation, "placement error without excerpt");
            break;
    }
}

std::optional<std::string> extract_init_section(std::string_view log) {
    auto lines = text::split_lines(log);
    std::optional<std::size_t> begin;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (lines[i].find(kInitBegin) != std::string::npos) {
            begin = i;
        } else if (begin && lines[i].find(kInitEnd) != std::string::npos) {
            std::vector<std::string> section(lines.begin() + static_cast<std::ptrdiff_t>(*begin),
                                             lines.begin() + static_cast<std::ptrdiff_t>(i) + 1);
            return text::join(section, "\n");
        }
    }
    if (begin) {
        // Script died before printing END: everything after BEGIN is relevant.
        std::vector<std::string> section(lines.begin() + static_cast<std::ptrdiff_t>(*begin), lines.end());
        return text::join(section, "\n");
    }
    return std::nullopt;
}

bool init_section_failed(std::string_view log) {
    auto section = extract_init_section(log);
    if (!section) return false;
    auto lines = text::split_lines(*section);
    const std::string& last = lines.back();
    if (last.find(kInitEnd) == std::string::npos) return true;
    return last.find("status=error") != std::string::npos;
}

bool is_mesh_file(const std::filesystem::path& file) {
    auto ext = text::to_lower(file.extension().string());
    return ext == ".glb" || ext == ".gltf" || ext == ".fbx" || ext == ".obj";
}

std::vector<std::string> declared_actor_classes(const CodeBundle& bundle) {
    static const std::regex re(R"(class\s+(?:[A-Z0-9_]+_API\s+)?(A[A-Za-z0-9_]*)\s*(?:final\s*)?:\s*public\s+A[A-Za-z0-9_]*)");
    std::vector<std::string> out;
    for (const auto& [path, source] : bundle.files) {
        for (std::sregex_iterator it(source.begin(), source.end(), re), end; it != end; ++it) {
            auto name = (*it)[1].str();
            if (std::find(out.begin(), out.end(), name) == out.end()) out.push_back(name);
        }
    }
    return out;
}

}  // namespace garden::engine
