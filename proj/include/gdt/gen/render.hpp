#pragma once

#include <string>

#include "gdt/flexscript/ast.hpp"
#include "gdt/gen/spec.hpp"

namespace gdt::gen {

inline constexpr double kGridSpacing = 4.0;
inline constexpr double kParallelBufferCapacity = 2.0;

/// Layout for a spec as a script.
///
/// Chain: Source1, Queue/Processor pairs, Sink1. conveyor_form swaps the
/// queues for conveyors; a conveyor layout type adds a conveyor after every
/// processor not already followed by one. parallel splits the machines
/// ceil(n/2) / floor(n/2) across two branches, each entered through a
/// capacity-2 queue, merging at Combiner1 (ProcessTime constant(1)). Any
/// automation other than manual adds one transporter bound to every
/// processor through a center port.
flexscript::Script build_script(const GenSpec& spec);

// Canonical text of build_script(spec).
std::string emit_code(const GenSpec& spec);

/// SVG drawing of the layout: one rect per object (data-name, data-type) in
/// declaration order, one line.flow per flow connection (data-from, data-to),
/// dashed line.binding per center binding, and a title block.
std::string render_sketch(const GenSpec& spec);

/// Natural-language request for the layout. The template family and the
/// synonyms come from spec.seed. Every parameter of the code appears once as
/// "<Object> ... <ParamName> ... <value>", with the value spelled as in the
/// code.
std::string render_prompt(const GenSpec& spec);

}  // namespace gdt::gen
