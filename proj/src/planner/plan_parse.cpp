#include "garden/planner/plan_parse.hpp"

#include <algorithm>
#include <regex>

#include "garden/error.hpp"
#include "garden/util/text.hpp"

namespace garden::planner {

namespace {

const std::regex& numbered_line() {
    static const std::regex re(R"(^\s*(?:\*\*)?(\d+)[.):](?:\*\*)?\s+(.*\S)\s*$)");
    return re;
}

const std::regex& header_line() {
    static const std::regex re(R"(^\s*(?:#+\s*)?(?:\*\*)?(OUTLINE|DETAIL|RESTATEMENT)(?:\*\*)?\s*:(?:\*\*)?\s*(.*)$)",
                               std::regex::icase);
    return re;
}

const std::regex& marker_tail() {
    static const std::regex re(R"(\[\s*LEAF\s*:\s*([^\]]*?)\s*\]\s*$)", std::regex::icase);
    return re;
}

}  // namespace

PlanParse parse_plan_response(std::string_view response) {
    PlanParse out;
    bool in_header = false;
    bool in_list = false;
    std::vector<std::string> header_lines;

    for (const auto& raw : text::split_lines(response)) {
        std::smatch m;
        if (std::regex_match(raw, m, numbered_line())) {
            in_list = true;
            in_header = false;
            out.steps.push_back(text::trim(m[2].str()));
            continue;
        }
        if (!in_list && std::regex_match(raw, m, header_line())) {
            in_header = true;
            header_lines.push_back(text::trim(m[2].str()));
            continue;
        }
        auto line = text::trim(raw);
        if (line.empty()) {
            in_header = false;
            continue;
        }
        if (in_header) {
            header_lines.push_back(line);
        } else if (in_list && !raw.empty() && (raw[0] == ' ' || raw[0] == '\t') && !out.steps.empty()) {
            // Indented continuation of the previous step.
            out.steps.back() += " " + line;
        }
    }
    std::vector<std::string> kept;
    for (auto& h : header_lines) {
        if (!h.empty()) kept.push_back(std::move(h));
    }
    out.reformulation = text::join(kept, " ");
    std::erase_if(out.steps, [](const std::string& s) { return text::trim(strip_leaf_marker(s)).empty(); });
    if (out.steps.empty()) fail(ErrorCode::ParseFailure, "no numbered step list found");
    return out;
}

std::optional<LeafMarker> parse_leaf_marker(std::string_view step_text, const GardenConfig& config) {
    std::string s(step_text);
    std::smatch m;
    if (!std::regex_search(s, m, marker_tail())) return std::nullopt;
    auto name = text::trim(m[1].str());
    const SubmoduleDescriptor* d = config.find_submodule(name);
    if (!d) fail(ErrorCode::UnknownSubmodule, "leaf marker names unknown submodule '" + name + "'");
    return LeafMarker{d->name};
}

std::string strip_leaf_marker(std::string_view step_text) {
    std::string s(step_text);
    std::smatch m;
    if (!std::regex_search(s, m, marker_tail())) return text::trim(s);
    return text::trim(s.substr(0, static_cast<std::size_t>(m.position(0))));
}

std::string render_leaf_marker(std::string_view step_text, std::string_view submodule) {
    return text::trim(step_text) + " [LEAF: " + std::string(submodule) + "]";
}

std::map<std::string, std::string> parse_task_sections(std::string_view response, Executor executor) {
    const auto schema = prompt_schema(executor);
    std::map<std::string, std::string> out;

    if (schema.size() == 1 && schema.front() == "description") {
        static const std::regex desc(R"(^\s*(?:#+\s*)?(?:\*\*)?DESCRIPTION(?:\*\*)?\s*:\s*)", std::regex::icase);
        std::string body(response);
        std::smatch m;
        if (std::regex_search(body, m, desc)) body = body.substr(static_cast<std::size_t>(m.position(0) + m.length(0)));
        body = text::trim(body);
        // Strip one level of surrounding quotes.
        if (body.size() >= 2 && body.front() == '"' && body.back() == '"') body = text::trim(body.substr(1, body.size() - 2));
        if (body.empty()) fail(ErrorCode::ParseFailure, "empty asset description");
        out["description"] = body;
        return out;
    }

    // Section headers: `ACTOR:` / `## Spawner prompt:` etc.
    static const std::regex header(R"(^\s*(?:#+\s*)?(?:\*\*)?([A-Za-z]+)(?:\s+PROMPT)?(?:\*\*)?\s*:(?:\*\*)?\s*(.*)$)",
                                   std::regex::icase);
    std::string current;
    for (const auto& line : text::split_lines(response)) {
        std::smatch m;
        if (std::regex_match(line, m, header)) {
            auto name = text::to_lower(m[1].str());
            if (std::find(schema.begin(), schema.end(), name) != schema.end()) {
                current = name;
                out[current] += m[2].str();
                continue;
            }
        }
        if (current.empty()) continue;
        auto& body = out[current];
        if (!body.empty()) body += "\n";
        body += line;
    }
    for (auto& [name, body] : out) body = text::trim(body);
    for (const auto& name : schema) {
        auto it = out.find(name);
        if (it == out.end() || it->second.empty()) {
            fail(ErrorCode::ParseFailure, "task response lacks section " + text::to_lower(name));
        }
    }
    return out;
}

std::vector<std::string> parse_roster_assignment(std::string_view response, std::size_t count,
                                                 const GardenConfig& config) {
    std::vector<std::optional<std::string>> slots(count);
    for (const auto& line : text::split_lines(response)) {
        std::smatch m;
        if (!std::regex_match(line, m, numbered_line())) continue;
        std::size_t n = std::stoul(m[1].str());
        if (n == 0 || n > count) continue;
        std::string name = text::trim(m[2].str());
        std::smatch mm;
        if (std::regex_search(name, mm, marker_tail())) name = mm[1].str();
        // Tolerate "code_generator - reason" and backticks.
        name = name.substr(0, name.find_first_of(" \t("));
        std::erase(name, '`');
        while (!name.empty() && (name.back() == '.' || name.back() == ',' || name.back() == ':')) name.pop_back();
        const SubmoduleDescriptor* d = config.find_submodule(name);
        if (!d) fail(ErrorCode::UnknownSubmodule, "assignment names unknown submodule '" + name + "'");
        slots[n - 1] = d->name;
    }
    std::vector<std::string> out;
    for (std::size_t i = 0; i < count; ++i) {
        if (!slots[i]) fail(ErrorCode::ParseFailure, "no submodule assigned to step " + std::to_string(i + 1));
        out.push_back(*slots[i]);
    }
    return out;
}

}  // namespace garden::planner
