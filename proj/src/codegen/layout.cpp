#include "garden/codegen/layout.hpp"

#include <cmath>

#include "garden/error.hpp"

namespace garden::codegen {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

ordered_json vec_json(const Vec3& v) { return ordered_json::array({v[0], v[1], v[2]}); }

Vec3 vec_from(const json& j, const char* field) {
    if (!j.is_array() || j.size() != 3) fail(ErrorCode::MalformedLayout, std::string(field) + " must be a 3-array");
    Vec3 out{};
    for (std::size_t i = 0; i < 3; ++i) {
        if (!j[i].is_number()) fail(ErrorCode::MalformedLayout, std::string(field) + " must be numeric");
        out[i] = j[i].get<double>();
        if (!std::isfinite(out[i])) fail(ErrorCode::MalformedLayout, std::string(field) + " must be finite");
    }
    return out;
}

ordered_json property_json(const PropertyValue& v) {
    return std::visit([](const auto& x) { return ordered_json(x); }, v);
}

PropertyValue property_from(const json& j, const std::string& name) {
    if (j.is_boolean()) return j.get<bool>();
    if (j.is_number_integer()) {
        if (j.is_number_unsigned() && j.get<std::uint64_t>() > static_cast<std::uint64_t>(INT64_MAX)) {
            fail(ErrorCode::MalformedLayout, "property " + name + " out of range");
        }
        return j.get<std::int64_t>();
    }
    if (j.is_number_float()) {
        double d = j.get<double>();
        if (!std::isfinite(d)) fail(ErrorCode::MalformedLayout, "property " + name + " is not finite");
        return d;
    }
    if (j.is_string()) return j.get<std::string>();
    fail(ErrorCode::MalformedLayout, "property " + name + " must be a scalar or text");
}

// End of the balanced JSON object starting at `start`, honouring strings.
std::size_t object_end(std::string_view s, std::size_t start) {
    int depth = 0;
    bool in_string = false;
    for (std::size_t i = start; i < s.size(); ++i) {
        char c = s[i];
        if (in_string) {
            if (c == '\\') {
                ++i;
            } else if (c == '"') {
                in_string = false;
            }
            continue;
        }
        if (c == '"') {
            in_string = true;
        } else if (c == '{') {
            ++depth;
        } else if (c == '}') {
            if (--depth == 0) return i + 1;
        }
    }
    return std::string_view::npos;
}

}  // namespace

ordered_json layout_to_json(const LayoutSpec& layout) {
    ordered_json actors = ordered_json::array();
    for (const auto& a : layout.actors) {
        ordered_json props = ordered_json::object();
        for (const auto& [k, v] : a.properties) props[k] = property_json(v);
        ordered_json entry;
        entry["class"] = a.class_name;
        entry["position"] = vec_json(a.position);
        entry["rotation"] = vec_json(a.rotation);
        entry["scale"] = vec_json(a.scale);
        entry["properties"] = std::move(props);
        actors.push_back(std::move(entry));
    }
    ordered_json doc;
    doc["actors"] = std::move(actors);
    return doc;
}

std::string serialize_layout(const LayoutSpec& layout) { return layout_to_json(layout).dump(2) + "\n"; }

LayoutSpec layout_from_json(const json& doc) {
    if (!doc.is_object() || !doc.contains("actors") || !doc["actors"].is_array()) {
        fail(ErrorCode::MalformedLayout, "layout needs an \"actors\" array");
    }
    LayoutSpec out;
    for (const auto& j : doc["actors"]) {
        if (!j.is_object()) fail(ErrorCode::MalformedLayout, "actor entry must be an object");
        ActorPlacement a;
        if (!j.contains("class") || !j["class"].is_string() || j["class"].get<std::string>().empty()) {
            fail(ErrorCode::MalformedLayout, "actor needs a non-empty class");
        }
        a.class_name = j["class"].get<std::string>();
        if (j.contains("position")) a.position = vec_from(j["position"], "position");
        if (j.contains("rotation")) a.rotation = vec_from(j["rotation"], "rotation");
        if (j.contains("scale")) a.scale = vec_from(j["scale"], "scale");
        for (double s : a.scale) {
            if (s <= 0) fail(ErrorCode::MalformedLayout, "scale components must be positive");
        }
        if (j.contains("properties")) {
            if (!j["properties"].is_object()) fail(ErrorCode::MalformedLayout, "properties must be an object");
            for (const auto& [k, v] : j["properties"].items()) a.properties[k] = property_from(v, k);
        }
        out.actors.push_back(std::move(a));
    }
    return out;
}

LayoutSpec parse_layout_document(std::string_view document) {
    json doc;
    try {
        doc = json::parse(document);
    } catch (const json::exception& e) {
        fail(ErrorCode::MalformedLayout, e.what());
    }
    return layout_from_json(doc);
}

LayoutSpec parse_layout(std::string_view response_text) {
    std::optional<std::string> malformed;
    for (std::size_t pos = response_text.find('{'); pos != std::string_view::npos;
         pos = response_text.find('{', pos + 1)) {
        auto end = object_end(response_text, pos);
        if (end == std::string_view::npos) break;
        json doc = json::parse(response_text.substr(pos, end - pos), nullptr, false);
        if (doc.is_discarded() || !doc.is_object() || !doc.contains("actors")) continue;
        try {
            return layout_from_json(doc);
        } catch (const Error& e) {
            if (!malformed) malformed = e.what();
        }
    }
    if (malformed) fail(ErrorCode::MalformedLayout, *malformed);
    fail(ErrorCode::NoLayoutFound, "response contains no layout document");
}

LayoutSpec default_layout(std::string class_name) {
    LayoutSpec out;
    ActorPlacement a;
    a.class_name = std::move(class_name);
    out.actors.push_back(std::move(a));
    return out;
}

}  // namespace garden::codegen
