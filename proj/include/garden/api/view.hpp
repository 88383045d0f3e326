#pragma once

#include <cstddef>

#include "garden/core/garden.hpp"
#include "garden/persistence/codec.hpp"

namespace garden::api {

inline constexpr std::size_t kTextExcerpt = 120;

// Summary of a garden snapshot: node list with text excerpts, the active
// node, mode, frontier and a config summary.
persistence::Json garden_view(const Garden& garden);

// Full node including payload, children ids and convenience fields
// (screenshots, feedback) lifted out of the payload.
persistence::Json node_view(const Garden& garden, NodeId id);

}  // namespace garden::api
