#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <tuple>
#include <sstream>

#include "treeshift/fixtures.hpp"
#include "treeshift/transitivity.hpp"

using namespace treeshift;

namespace {

const Signature F2 = Signature::group(2);
const Signature H2 = Signature::monoid(2);

std::string dump(const EdgeGraph& g, const std::vector<std::string>& names) {
  std::ostringstream os;
  for (const auto& e : g.edges()) os << names[e.from] << " -" << e.letter << "-> " << names[e.to] << "\n";
  return os.str();
}

EdgeGraph family_graph(const PointFamily& f, int k = 3, int depth = 5) {
  return edge_graph(f.points, Dyadic{k}, depth);
}

// Independent chain existence: the set of (point, last letter) pairs reachable
// by words of each exact length, iterated up to max_len.
bool brute_chain(const EdgeGraph& g, int from, int to, int max_len, std::optional<char> first = {},
                 std::optional<char> last = {}) {
  std::set<std::pair<int, char>> layer;
  for (char i : g.signature().letters())
    if (!first || i == *first)
      for (int w : g.out(from, i)) layer.insert({w, i});
  for (int len = 1; len <= max_len && !layer.empty(); ++len) {
    for (auto [p, l] : layer)
      if (p == to && (!last || l == *last)) return true;
    std::set<std::pair<int, char>> next;
    for (auto [p, l] : layer)
      for (char i : g.signature().letters()) {
        if (g.signature().is_group() && i == inverse_letter(l)) continue;
        for (int w : g.out(p, i)) next.insert({w, i});
      }
    layer = std::move(next);
  }
  return false;
}

}  // namespace

TEST_CASE("edge graph preconditions") {
  auto f = full_shift_2_family();
  CHECK_THROWS_AS(edge_graph(f.points, Dyadic{3}, 3), Error);
  CHECK_NOTHROW(edge_graph(f.points, Dyadic{3}, 4));
  try {
    edge_graph({f.points[0], f.points[0]}, Dyadic{2}, 4);
    FAIL("expected DuplicatePoints");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::duplicate_points);
  }
  CHECK_THROWS_AS(edge_graph({}, Dyadic{2}, 4), Error);
}

TEST_CASE("mod-3 cycle edges") {
  auto f = full_shift_2_family();
  auto g = family_graph(f);
  // Generators add one to the residue, inverses subtract one.
  for (int r = 0; r < 3; ++r) {
    CHECK(g.out(r, 'a') == std::vector<int>{(r + 1) % 3});
    CHECK(g.out(r, 'b') == std::vector<int>{(r + 1) % 3});
    CHECK(g.out(r, 'A') == std::vector<int>{(r + 2) % 3});
  }
  CHECK(is_ict(g).holds);
  auto c = is_cict(g);
  REQUIRE(c.holds);
  CHECK(c.assignment->i == std::vector<char>{'a', 'a', 'a'});
  CHECK(c.assignment->t == std::vector<char>{'a', 'a', 'a'});
  CHECK(core(g).vertices == std::vector<int>{0, 1, 2});
}

TEST_CASE("ICT but not CICT, corrected direction") {
  auto f = ict_not_cict_family(Direction::corrected);
  auto g = family_graph(f);
  CAPTURE(dump(g, f.names));
  // x0 = 0: only in-edge x1 -b->, only out-edge -B-> x1.
  for (const auto& e : g.edges()) {
    if (e.to == 0) CHECK((e.from == 1 && e.letter == 'b'));
    if (e.from == 0) CHECK((e.to == 1 && e.letter == 'B'));
  }
  auto ict = is_ict(g);
  CHECK(ict.holds);
  for (int x = 0; x < g.size(); ++x)
    for (int y = 0; y < g.size(); ++y)
      if (ict.chains[x][y]) CHECK(chain_is_valid(g, *ict.chains[x][y]));
  auto cict = is_cict(g);
  CHECK_FALSE(cict.holds);
  REQUIRE(cict.refutation);
  REQUIRE(cict.refutation->point);
  CHECK(*cict.refutation->point == 0);
  CHECK(cict.refutation->in_letters == std::vector<char>{'b'});
  CHECK(cict.refutation->out_letters == std::vector<char>{'B'});
}

TEST_CASE("ICT but not CICT, literal direction") {
  auto f = ict_not_cict_family(Direction::literal);
  // σ_aaa(x2) and σ_aaaa(x2) first differ at length 5.
  try {
    family_graph(f);
    FAIL("expected DuplicatePoints");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::duplicate_points);
  }
  auto g = family_graph(f, 3, 7);
  CAPTURE(dump(g, f.names));
  auto ict = is_ict(g);
  CHECK_FALSE(ict.holds);
  CHECK_FALSE(is_cict(g).holds);
}

TEST_CASE("find_chain against brute force") {
  for (auto f : {full_shift_2_family(), ict_not_cict_family(Direction::corrected), golden_mean_monoid_family()}) {
    auto g = family_graph(f);
    for (int x = 0; x < g.size(); ++x)
      for (int y = 0; y < g.size(); ++y)
        for (char first : g.signature().letters()) {
          auto c = find_chain(g, x, y, {first, std::nullopt, false});
          CHECK(c.has_value() == brute_chain(g, x, y, 2 * g.size() * 4, first));
          if (c) {
            CHECK(chain_is_valid(g, *c));
            CHECK(c->word.first() == first);
            CHECK(c->points.front() == x);
            CHECK(c->points.back() == y);
          }
        }
  }
}

TEST_CASE("chains are nonempty") {
  // A lone point with no loops has no chain to itself.
  auto g = EdgeGraph::synthetic(H2, 2, {{0, 'a', 1}, {0, 'b', 1}, {1, 'a', 1}, {1, 'b', 1}});
  CHECK_FALSE(find_chain(g, 0, 0));
  auto c = find_chain(g, 1, 1);
  REQUIRE(c);
  CHECK(c->word.str() == "a");
  CHECK_FALSE(is_ict(g).holds);
}

TEST_CASE("CICT on monoids matches ICT") {
  auto g = family_graph(golden_mean_monoid_family());
  CHECK(is_ict(g).holds);
  auto c = is_cict(g);
  REQUIRE(c.holds);
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) {
      REQUIRE(c.chains[x][y]);
      CHECK(c.chains[x][y]->word.first() == c.assignment->i[x]);
      CHECK(c.chains[x][y]->word.last() == c.assignment->t[y]);
    }
}

TEST_CASE("CICT budget") {
  auto g = family_graph(full_shift_2_family());
  CHECK_THROWS_AS(is_cict(g, 0), Error);
}

TEST_CASE("core deletion cascade") {
  // v = 2 lacks a b-edge; u = 1 loses its only a-edge with it; 0 survives.
  std::vector<Edge> edges = {{0, 'a', 0}, {0, 'b', 0}, {1, 'a', 2}, {1, 'b', 0}, {0, 'a', 1}, {2, 'a', 0}};
  auto g = EdgeGraph::synthetic(H2, 3, edges);
  auto c = core(g);
  CHECK(c.vertices == std::vector<int>{0});
  CHECK(c.contains(0));
  CHECK_FALSE(c.contains(1));
  CHECK(c.edges.size() == 2);
}

TEST_CASE("core uses bi-edges on groups") {
  // 0 -a-> 1 without 1 -A-> 0 does not count.
  auto g = EdgeGraph::synthetic(Signature::group(1), 2,
                                {{0, 'a', 1}, {0, 'A', 0}, {1, 'a', 1}, {1, 'A', 1}});
  CHECK(core(g).vertices == std::vector<int>{1});
  auto h = EdgeGraph::synthetic(Signature::group(1), 2,
                                {{0, 'a', 1}, {1, 'A', 0}, {1, 'a', 0}, {0, 'A', 1}});
  CHECK(core(h).vertices == std::vector<int>{0, 1});
}

TEST_CASE("IBT on the mod-3 cycle") {
  auto f = full_shift_2_family();
  auto g = family_graph(f);
  CHECK_THROWS_AS(is_ibt(g, 3), Error);
  auto r = is_ibt(g, 4);
  REQUIRE(r.witnessed);
  std::string why;
  CHECK_MESSAGE(ibt_witness_is_valid(g, *r.witness, 4, false, false, &why), why);
  REQUIRE(r.witness->report);
  CHECK(r.witness->report->passed);

  auto s = is_ibt_star(g, 4);
  REQUIRE(s.witnessed);
  CHECK_MESSAGE(ibt_witness_is_valid(g, *s.witness, 4, true, false, &why), why);
  CHECK(s.witness->report->passed);
  CHECK_THROWS_AS(is_ibt_circ(g, 4), Error);
}

TEST_CASE("IBT refuted outside the core") {
  auto f = ict_not_cict_family(Direction::corrected);
  auto g = family_graph(f);
  auto r = is_ibt(g, 11);
  CHECK_FALSE(r.witnessed);
  REQUIRE(r.refutation);
  CHECK(std::find(r.refutation->outside_core.begin(), r.refutation->outside_core.end(), 0) !=
        r.refutation->outside_core.end());
  CHECK_FALSE(is_ibt_star(g, 11).witnessed);
}

TEST_CASE("IBT circ on monoids") {
  auto g = family_graph(golden_mean_monoid_family());
  auto r = is_ibt_circ(g, 3);
  REQUIRE(r.witnessed);
  std::string why;
  CHECK_MESSAGE(ibt_witness_is_valid(g, *r.witness, 3, false, true, &why), why);
  CHECK(r.witness->report->passed);
  CHECK(*r.witness->y == r.witness->root);
  CHECK_THROWS_AS(is_ibt_star(g, 3), Error);

  // A fixed point: y at e and again at "a".
  auto fixed = EdgeGraph::synthetic(H2, 1, {{0, 'a', 0}, {0, 'b', 0}});
  auto c = is_ibt_circ(fixed, 2);
  REQUIRE(c.witnessed);
  CHECK(c.witness->y_sites.front().str() == "b");
  CHECK(c.witness->sites.front().str() == "a");
}

TEST_CASE("IBT refutation without a common root") {
  // Two absorbing fixed points: each core vertex only reaches itself.
  auto g = EdgeGraph::synthetic(H2, 2, {{0, 'a', 0}, {0, 'b', 0}, {1, 'a', 1}, {1, 'b', 1}});
  auto r = is_ibt(g, 3);
  CHECK_FALSE(r.witnessed);
  REQUIRE(r.refutation);
  CHECK(r.refutation->outside_core.empty());
  CHECK_FALSE(is_ibt_circ(g, 3).witnessed);
}

TEST_CASE("IBT witness checker rejects tampering") {
  auto g = family_graph(full_shift_2_family());
  auto r = is_ibt(g, 4);
  REQUIRE(r.witnessed);
  auto w = *r.witness;
  w.labels[1] = (w.labels[1] + 1) % 3;
  CHECK_FALSE(ibt_witness_is_valid(g, w, 4, false, false));
  auto v = *r.witness;
  v.sites[1] = v.sites[0];
  CHECK_FALSE(ibt_witness_is_valid(g, v, 4, false, false));
}

TEST_CASE("CICT against exhaustive assignments") {
  std::mt19937 rng(7);
  for (auto sig : {Signature::group(1), F2, H2}) {
    const auto letters = sig.letters();
    for (int trial = 0; trial < 60; ++trial) {
      const int n = 2 + static_cast<int>(rng() % 2);
      std::vector<Edge> edges;
      for (int a = 0; a < n; ++a)
        for (char i : letters)
          for (int b = 0; b < n; ++b)
            if (rng() % 3 == 0) edges.push_back({a, i, b});
      auto g = EdgeGraph::synthetic(sig, n, edges);
      const int bound = 2 * n * static_cast<int>(letters.size()) + 2;
      const std::size_t L = letters.size();
      std::map<std::tuple<int, int, char, char>, bool> has;
      for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
          for (char i : letters)
            for (char t : letters) has[{x, y, i, t}] = brute_chain(g, x, y, bound, i, t);
      // Odometer over every (i, t) per point.
      std::vector<std::size_t> digit(2 * n, 0);
      bool exists = false;
      for (;;) {
        bool ok = true;
        for (int x = 0; x < n && ok; ++x)
          if (sig.is_group() && letters[digit[2 * x]] == inverse_letter(letters[digit[2 * x + 1]])) ok = false;
        for (int x = 0; x < n && ok; ++x)
          for (int y = 0; y < n && ok; ++y)
            ok = has[{x, y, letters[digit[2 * x]], letters[digit[2 * y + 1]]}];
        if (ok) {
          exists = true;
          break;
        }
        std::size_t k = 0;
        while (k < digit.size() && ++digit[k] == L) digit[k++] = 0;
        if (k == digit.size()) break;
      }
      auto c = is_cict(g);
      CAPTURE(sig.to_string());
      CHECK(c.holds == exists);
      if (c.holds)
        for (int x = 0; x < n; ++x)
          for (int y = 0; y < n; ++y) {
            REQUIRE(c.chains[x][y]);
            CHECK(chain_is_valid(g, *c.chains[x][y]));
          }
    }
  }
}
