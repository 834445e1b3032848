#pragma once

// Text renderings of blocks and edge graphs: an indented ASCII tree and DOT.

#include <string>
#include <vector>

#include "treeshift/transitivity.hpp"

namespace treeshift {

enum class RenderFormat { ascii, dot };

RenderFormat parse_render_format(const std::string& text);

/// Largest block depth the renderers accept; 0 disables the check.
int render_cap() noexcept;
void set_render_cap(int depth) noexcept;

/// ASCII: one line per word in depth-first order, children in letter order,
/// "<indent><word>: <symbol>". DOT: one node per word, edges u -> ui labeled i.
/// Throws RenderCapExceeded when the depth exceeds render_cap().
/// Symbols print by name when an alphabet is given, as indices otherwise.
std::string render_block(const Block& b, const Alphabet* alphabet, RenderFormat format);

/// Points are named by `names` (x0, x1, ... when empty).
std::string render_edge_graph(const EdgeGraph& g, const std::vector<std::string>& names, RenderFormat format);

}  // namespace treeshift
