#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "garden/core/types.hpp"

namespace garden::codegen {

// Canonical layout document:
// { "actors": [ {"class": str, "position": [x,y,z], "rotation": [p,y,r],
//                "scale": [x,y,z], "properties": {..}} ] }
// Keys are emitted in that order, properties sorted by name, vectors as
// doubles. serialize(parse(serialize(x))) == serialize(x) byte for byte.
std::string serialize_layout(const LayoutSpec& layout);
nlohmann::ordered_json layout_to_json(const LayoutSpec& layout);
// Throws MalformedLayout on schema or invariant violations.
LayoutSpec layout_from_json(const nlohmann::json& doc);
LayoutSpec parse_layout_document(std::string_view document);

// First well-formed layout document embedded anywhere in a model response.
// Throws NoLayoutFound or MalformedLayout.
LayoutSpec parse_layout(std::string_view response_text);

// One instance of `class_name` at the origin, identity rotation, unit scale.
LayoutSpec default_layout(std::string class_name);

}  // namespace garden::codegen
