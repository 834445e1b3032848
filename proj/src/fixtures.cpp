#include "treeshift/fixtures.hpp"

namespace treeshift {

namespace {

std::vector<Block> neighbor_rule(Signature sig, bool (*bad)(Symbol center, Symbol neighbor)) {
  // Every 2-block over {0,1} whose center clashes with some neighbor.
  const auto ball = shared_ball(sig, 2);
  const std::size_t n = ball->size();
  std::vector<Block> out;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    std::vector<Symbol> entries(n);
    for (std::size_t i = 0; i < n; ++i) entries[i] = static_cast<Symbol>((mask >> (n - 1 - i)) & 1u);
    bool clash = false;
    for (std::size_t i = 1; i < n; ++i) clash = clash || bad(entries[0], entries[i]);
    if (clash) out.emplace_back(sig, 2, std::move(entries));
  }
  return out;
}

}  // namespace

ShiftSystem two_point_system(Signature sig) {
  return ShiftSystem(sig, Alphabet::numeric(2),
                     neighbor_rule(sig, [](Symbol c, Symbol v) { return c != v; }));
}

ShiftSystem golden_mean_system(Signature sig) {
  return ShiftSystem(sig, Alphabet::numeric(2),
                     neighbor_rule(sig, [](Symbol c, Symbol v) { return c == 1 && v == 1; }));
}

ShiftSystem full_shift(Signature sig, int symbols) { return ShiftSystem::full(sig, Alphabet::numeric(symbols)); }

Configuration parity_point(Signature sig, int phase) {
  std::vector<std::vector<int>> delta(2, std::vector<int>(sig.letter_count()));
  for (auto& t : delta[0]) t = 1;
  for (auto& t : delta[1]) t = 0;
  return Configuration::automaton(WordAutomaton(sig, phase & 1, delta, {0, 1}));
}

Configuration mod3_point(Signature sig, int residue) {
  std::vector<std::vector<int>> delta(3, std::vector<int>(sig.letter_count()));
  const auto letters = sig.letters();
  for (int r = 0; r < 3; ++r)
    for (std::size_t i = 0; i < letters.size(); ++i)
      delta[r][i] = (r + (is_inverse_letter(letters[i]) ? 2 : 1)) % 3;
  return Configuration::automaton(WordAutomaton(sig, ((residue % 3) + 3) % 3, delta, {1, 0, 0}));
}

Configuration ab_staircase(Symbol value) {
  const auto sig = Signature::group(2);
  // letters a b A B; states: 0 reading a's, 1 reading b's, 2 dead.
  std::vector<std::vector<int>> delta{{0, 1, 2, 2}, {2, 1, 2, 2}, {2, 2, 2, 2}};
  return Configuration::automaton(WordAutomaton(sig, 0, delta, {0, value, 0}));
}

Direction parse_direction(const std::string& text) {
  if (text == "literal") return Direction::literal;
  if (text == "corrected") return Direction::corrected;
  throw Error(ErrorCode::parse_error, "direction must be literal or corrected, got '" + text + "'");
}

const char* direction_name(Direction d) { return d == Direction::literal ? "literal" : "corrected"; }

PointFamily ict_not_cict_family(Direction direction) {
  const auto sig = Signature::group(2);
  auto w = [&](const char* s) { return ReducedWord::from_reduced(sig, s); };
  auto x0 = ab_staircase(1);
  auto x1 = shift(x0, w("B"));
  auto x2 = ab_staircase(2);
  PointFamily f{sig, Alphabet::numeric(3), {}, {}, full_shift(sig, 3)};
  auto add = [&](std::string name, Configuration c) {
    f.names.push_back(std::move(name));
    f.points.push_back(std::move(c));
  };
  add("x0", x0);
  add("x1", x1);
  add("p", shift(x1, w("A")));
  add("p'", shift(x1, w("AA")));
  add("x2", x2);
  add("x2'", shift(x2, w("B")));
  const char step = direction == Direction::literal ? 'a' : 'A';
  for (int i = 1; i <= 4; ++i) add("x" + std::to_string(2 + i), shift(x2, w(std::string(i, step).c_str())));
  return f;
}

PointFamily golden_mean_monoid_family() {
  const auto sig = Signature::monoid(2);
  return PointFamily{sig, Alphabet::numeric(2), {"even", "odd"},
                     {parity_point(sig, 0), parity_point(sig, 1)}, golden_mean_system(sig)};
}

PointFamily full_shift_2_family() {
  const auto sig = Signature::group(2);
  return PointFamily{sig,
                     Alphabet::numeric(2),
                     {"r0", "r1", "r2"},
                     {mod3_point(sig, 0), mod3_point(sig, 1), mod3_point(sig, 2)},
                     full_shift(sig, 2)};
}

std::vector<std::string> family_names() { return {"ict-not-cict", "golden-mean-monoid", "full-shift-2"}; }

PointFamily family_by_name(const std::string& name, Direction direction) {
  if (name == "ict-not-cict") return ict_not_cict_family(direction);
  if (name == "golden-mean-monoid") return golden_mean_monoid_family();
  if (name == "full-shift-2") return full_shift_2_family();
  throw Error(ErrorCode::usage, "unknown example '" + name + "'");
}

}  // namespace treeshift
