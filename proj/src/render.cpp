#include "treeshift/render.hpp"

#include <functional>
#include <sstream>

namespace treeshift {

namespace {

int g_render_cap = 8;

std::string node_id(const ReducedWord& u) { return "\"" + u.human() + "\""; }

}  // namespace

RenderFormat parse_render_format(const std::string& text) {
  if (text == "ascii") return RenderFormat::ascii;
  if (text == "dot") return RenderFormat::dot;
  throw Error(ErrorCode::usage, "unknown render format '" + text + "' (ascii, dot)");
}

int render_cap() noexcept { return g_render_cap; }
void set_render_cap(int depth) noexcept { g_render_cap = depth; }

std::string render_block(const Block& b, const Alphabet* alphabet, RenderFormat format) {
  if (g_render_cap > 0 && b.depth() > g_render_cap)
    throw Error(ErrorCode::render_cap_exceeded, "block depth " + std::to_string(b.depth()) + " exceeds the render cap " +
                                                    std::to_string(g_render_cap));
  const auto sig = b.signature();
  auto sym = [&](std::size_t i) {
    return alphabet && alphabet->valid(b[i]) ? alphabet->name(b[i]) : std::to_string(b[i]);
  };
  std::ostringstream out;
  const auto& dom = b.domain();
  // Children of u: u·i for letters i that extend it.
  auto children = [&](const ReducedWord& u) {
    std::vector<ReducedWord> kids;
    if (static_cast<int>(u.length()) + 1 >= b.depth()) return kids;
    for (char c : sig.letters()) {
      if (!u.is_identity() && c == inverse_letter(u.last())) continue;
      kids.push_back(concat(u, letter_word(sig, c)));
    }
    return kids;
  };
  if (format == RenderFormat::ascii) {
    std::function<void(const ReducedWord&)> walk = [&](const ReducedWord& u) {
      out << std::string(2 * u.length(), ' ') << u.human() << ": " << sym(*dom.index_of(u.str())) << '\n';
      for (const auto& v : children(u)) walk(v);
    };
    walk(ReducedWord::identity(sig));
    return out.str();
  }
  out << "digraph block {\n";
  for (std::size_t i = 0; i < dom.size(); ++i)
    out << "  " << node_id(dom[i]) << " [label=\"" << dom[i].human() << ": " << sym(i) << "\"];\n";
  for (std::size_t i = 0; i < dom.size(); ++i)
    for (const auto& v : children(dom[i]))
      out << "  " << node_id(dom[i]) << " -> " << node_id(v) << " [label=\"" << v.last() << "\"];\n";
  out << "}\n";
  return out.str();
}

std::string render_edge_graph(const EdgeGraph& g, const std::vector<std::string>& names, RenderFormat format) {
  auto name = [&](int v) {
    return static_cast<std::size_t>(v) < names.size() ? names[v] : "x" + std::to_string(v);
  };
  std::ostringstream out;
  if (format == RenderFormat::ascii) {
    for (const auto& e : g.edges()) out << name(e.from) << " -" << e.letter << "-> " << name(e.to) << '\n';
    return out.str();
  }
  out << "digraph edges {\n";
  for (int v = 0; v < g.size(); ++v) out << "  \"" << name(v) << "\";\n";
  for (const auto& e : g.edges())
    out << "  \"" << name(e.from) << "\" -> \"" << name(e.to) << "\" [label=\"" << e.letter << "\"];\n";
  out << "}\n";
  return out.str();
}

}  // namespace treeshift
