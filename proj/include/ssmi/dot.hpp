#pragma once

#include <string>

#include "ssmi/model.hpp"

namespace ssmi {

/// Render the model's dependency graph as Graphviz DOT. Node shapes:
/// Parameter = triangle, InterfaceInput = box, Intermediate = circle,
/// InterfaceOutput = ellipse; one deduplicated edge per (referenced ->
/// defined) pair; node labels are display labels. With split_submodels, each
/// sub-model becomes a cluster and every variable referenced across
/// sub-model lines is routed through a doublecircle connector node carrying
/// its label.
std::string emit_dot(const Model& model, bool split_submodels = false);

}  // namespace ssmi
