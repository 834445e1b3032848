#include "treeshift/transitivity.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

namespace treeshift {

EdgeGraph::EdgeGraph(Signature sig, int n, Dyadic epsilon, int depth)
    : sig_(sig), n_(n), epsilon_(epsilon), depth_(depth) {}

EdgeGraph::EdgeGraph(std::vector<Configuration> points, Dyadic epsilon, int depth)
    : epsilon_(epsilon), depth_(depth), points_(std::move(points)) {
  if (points_.empty()) throw Error(ErrorCode::empty_set, "edge graph needs at least one point");
  sig_ = points_.front().signature();
  n_ = static_cast<int>(points_.size());
  if (depth_ < epsilon_.exponent + 1)
    throw Error(ErrorCode::resolution_depth_mismatch, "eps = " + epsilon_.to_string() + " needs depth >= " +
                                                          std::to_string(epsilon_.exponent + 1));
  for (const auto& p : points_)
    if (!(p.signature() == sig_)) throw Error(ErrorCode::signature_mismatch, "points of mixed signatures");
  for (int a = 0; a < n_; ++a)
    for (int b = a + 1; b < n_; ++b)
      if (!distance(points_[a], points_[b], depth_).is_exact())
        throw Error(ErrorCode::duplicate_points, "points " + std::to_string(a) + " and " + std::to_string(b) +
                                                     " agree on the whole ball of depth " + std::to_string(depth_));
  for (int a = 0; a < n_; ++a)
    for (char i : sig_.letters()) {
      auto moved = shift(points_[a], i);
      for (int b = 0; b < n_; ++b)
        if (distance(moved, points_[b], depth_).less_than(epsilon_)) edges_.push_back({a, i, b});
    }
  index();
}

EdgeGraph EdgeGraph::synthetic(Signature sig, int vertices, std::vector<Edge> edges) {
  EdgeGraph g(sig, vertices, Dyadic{0}, 0);
  for (const auto& e : edges) {
    if (e.from < 0 || e.from >= vertices || e.to < 0 || e.to >= vertices)
      throw Error(ErrorCode::construction_error, "edge endpoint out of range");
    if (!sig.legal(e.letter)) throw Error(ErrorCode::invalid_letter, std::string("edge letter '") + e.letter + "'");
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    if (a.from != b.from) return a.from < b.from;
    if (a.letter != b.letter) return letter_order(a.letter) < letter_order(b.letter);
    return a.to < b.to;
  });
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  g.edges_ = std::move(edges);
  g.index();
  return g;
}

void EdgeGraph::index() {
  out_.assign(n_, std::vector<std::vector<int>>(sig_.letter_count()));
  for (const auto& e : edges_) out_[e.from][sig_.letter_index(e.letter)].push_back(e.to);
}

const std::vector<int>& EdgeGraph::out(int from, char letter) const {
  return out_.at(from).at(sig_.letter_index(letter));
}

bool EdgeGraph::has_edge(int from, char letter, int to) const {
  const auto& o = out(from, letter);
  return std::binary_search(o.begin(), o.end(), to);
}

bool EdgeGraph::has_bi_edge(int from, char letter, int to) const {
  if (!has_edge(from, letter, to)) return false;
  return !sig_.is_group() || has_edge(to, inverse_letter(letter), from);
}

EdgeGraph edge_graph(const std::vector<Configuration>& points, Dyadic epsilon, int depth) {
  return EdgeGraph(points, epsilon, depth);
}

namespace {

// May `next` follow `prev` in a reduced word? prev == 0 means no letter yet.
bool reduced_after(const Signature& sig, char prev, char next) {
  return prev == 0 || !sig.is_group() || next != inverse_letter(prev);
}

struct ChainState {
  int point;
  char last;
  int parent;  // index into the node list, -1 for first steps
};

}  // namespace

std::optional<ChainWitness> find_chain(const EdgeGraph& g, int from, int to, const ChainOptions& opts) {
  const auto& sig = g.signature();
  const auto letters = sig.letters();
  const std::size_t L = letters.size();
  std::vector<bool> seen(static_cast<std::size_t>(g.size()) * L, false);
  std::vector<ChainState> nodes;
  std::deque<int> queue;
  auto usable = [&](int a, char i, int b) { return opts.bi_edges ? g.has_bi_edge(a, i, b) : true; };
  auto push = [&](int point, char last, int parent) {
    auto key = static_cast<std::size_t>(point) * L + sig.letter_index(last);
    if (seen[key]) return;
    seen[key] = true;
    nodes.push_back({point, last, parent});
    queue.push_back(static_cast<int>(nodes.size()) - 1);
  };
  for (char i : letters) {
    if (opts.first && i != *opts.first) continue;
    for (int w : g.out(from, i))
      if (usable(from, i, w)) push(w, i, -1);
  }
  while (!queue.empty()) {
    int idx = queue.front();
    queue.pop_front();
    const ChainState s = nodes[idx];
    if (s.point == to && (!opts.last || s.last == *opts.last)) {
      std::string word;
      std::vector<int> pts;
      for (int k = idx; k >= 0; k = nodes[k].parent) {
        word.push_back(nodes[k].last);
        pts.push_back(nodes[k].point);
      }
      pts.push_back(from);
      std::reverse(word.begin(), word.end());
      std::reverse(pts.begin(), pts.end());
      return ChainWitness{ReducedWord::from_reduced(sig, word), pts};
    }
    for (char i : letters) {
      if (!reduced_after(sig, s.last, i)) continue;
      for (int w : g.out(s.point, i))
        if (usable(s.point, i, w)) push(w, i, idx);
    }
  }
  return std::nullopt;
}

bool chain_is_valid(const EdgeGraph& g, const ChainWitness& c) {
  if (c.word.length() == 0 || c.points.size() != c.word.length() + 1) return false;
  for (std::size_t k = 0; k < c.word.length(); ++k) {
    if (k > 0 && !reduced_after(g.signature(), c.word[k - 1], c.word[k])) return false;
    if (!g.has_edge(c.points[k], c.word[k], c.points[k + 1])) return false;
  }
  return true;
}

IctResult is_ict(const EdgeGraph& g) {
  IctResult res;
  res.holds = true;
  res.chains.assign(g.size(), std::vector<std::optional<ChainWitness>>(g.size()));
  for (int x = 0; x < g.size(); ++x)
    for (int y = 0; y < g.size(); ++y) {
      res.chains[x][y] = find_chain(g, x, y);
      res.holds = res.holds && res.chains[x][y].has_value();
    }
  return res;
}

namespace {

// reach[x][i] holds (y, t) pairs, encoded y * L + t, reachable by a chain that
// leaves x with letter i and arrives at y with letter t.
std::vector<std::vector<std::vector<bool>>> reach_table(const EdgeGraph& g) {
  const auto& sig = g.signature();
  const auto letters = sig.letters();
  const std::size_t L = letters.size(), n = static_cast<std::size_t>(g.size());
  std::vector<std::vector<std::vector<bool>>> reach(n, std::vector<std::vector<bool>>(L));
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t li = 0; li < L; ++li) {
      auto& seen = reach[x][li];
      seen.assign(n * L, false);
      std::deque<std::pair<int, char>> queue;
      for (int w : g.out(static_cast<int>(x), letters[li])) {
        auto key = static_cast<std::size_t>(w) * L + li;
        if (!seen[key]) {
          seen[key] = true;
          queue.emplace_back(w, letters[li]);
        }
      }
      while (!queue.empty()) {
        auto [p, last] = queue.front();
        queue.pop_front();
        for (std::size_t lj = 0; lj < L; ++lj) {
          if (!reduced_after(sig, last, letters[lj])) continue;
          for (int w : g.out(p, letters[lj])) {
            auto key = static_cast<std::size_t>(w) * L + lj;
            if (!seen[key]) {
              seen[key] = true;
              queue.emplace_back(w, letters[lj]);
            }
          }
        }
      }
    }
  return reach;
}

std::vector<char> sorted_letters(const Signature& sig, std::set<char> s) {
  std::vector<char> out(s.begin(), s.end());
  std::sort(out.begin(), out.end(), [&](char a, char b) { return sig.letter_index(a) < sig.letter_index(b); });
  return out;
}

}  // namespace

CictResult is_cict(const EdgeGraph& g, std::size_t budget) {
  const auto& sig = g.signature();
  const auto letters = sig.letters();
  const std::size_t L = letters.size();
  const int n = g.size();
  const auto reach = reach_table(g);
  auto R = [&](int x, std::size_t i, int y, std::size_t t) { return reach[x][i][static_cast<std::size_t>(y) * L + t]; };

  // Unary domains: (i, t) with i != t^-1, a loop at x, and partial support
  // toward and from every other point.
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> domain(n);
  for (int x = 0; x < n; ++x)
    for (std::size_t i = 0; i < L; ++i)
      for (std::size_t t = 0; t < L; ++t) {
        if (sig.is_group() && letters[i] == inverse_letter(letters[t])) continue;
        if (!R(x, i, x, t)) continue;
        bool ok = true;
        for (int y = 0; y < n && ok; ++y) {
          bool to = false, back = false;
          for (std::size_t l = 0; l < L; ++l) {
            to = to || R(x, i, y, l);
            back = back || R(y, l, x, t);
          }
          ok = to && back;
        }
        if (ok) domain[x].emplace_back(i, t);
      }

  CictResult res;
  for (int x = 0; x < n; ++x) {
    if (!domain[x].empty()) continue;
    std::set<char> in, out;
    for (const auto& e : g.edges()) {
      if (e.to == x) in.insert(e.letter);
      if (e.from == x) out.insert(e.letter);
    }
    res.refutation = CictRefutation{x, sorted_letters(sig, in), sorted_letters(sig, out),
                                    "no entry/exit letter pair (i, t) with i != t^-1 supports chains through point " +
                                        std::to_string(x)};
    return res;
  }

  std::vector<int> pick(n, -1);
  std::size_t nodes = 0;
  int x = 0;
  while (x >= 0 && x < n) {
    ++pick[x];
    if (pick[x] >= static_cast<int>(domain[x].size())) {
      pick[x] = -1;
      --x;
      continue;
    }
    if (++nodes > budget)
      throw Error(ErrorCode::search_budget_exhausted, "CICT search exceeded " + std::to_string(budget) + " nodes");
    auto [i, t] = domain[x][pick[x]];
    bool ok = true;
    for (int y = 0; y < x && ok; ++y) {
      auto [iy, ty] = domain[y][pick[y]];
      ok = R(x, i, y, ty) && R(y, iy, x, t);
    }
    if (ok) ++x;
  }
  if (x < 0) {
    res.refutation = CictRefutation{std::nullopt, {}, {}, "no consistent assignment of entry and exit letters"};
    return res;
  }

  CictAssignment a;
  for (int y = 0; y < n; ++y) {
    a.i.push_back(letters[domain[y][pick[y]].first]);
    a.t.push_back(letters[domain[y][pick[y]].second]);
  }
  res.chains.assign(n, std::vector<std::optional<ChainWitness>>(n));
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) res.chains[p][q] = find_chain(g, p, q, {a.i[p], a.t[q], false});
  res.assignment = std::move(a);
  res.holds = true;
  return res;
}

bool Core::contains(int v) const { return std::binary_search(vertices.begin(), vertices.end(), v); }

Core core(const EdgeGraph& g) {
  const auto& sig = g.signature();
  const auto letters = sig.letters();
  std::vector<bool> alive(g.size(), true);
  for (bool changed = true; changed;) {
    changed = false;
    for (int v = 0; v < g.size(); ++v) {
      if (!alive[v]) continue;
      for (char i : letters) {
        bool any = false;
        for (int w : g.out(v, i)) any = any || (alive[w] && g.has_bi_edge(v, i, w));
        if (!any) {
          alive[v] = false;
          changed = true;
          break;
        }
      }
    }
  }
  Core c;
  for (int v = 0; v < g.size(); ++v)
    if (alive[v]) c.vertices.push_back(v);
  for (const auto& e : g.edges())
    if (alive[e.from] && alive[e.to] && g.has_bi_edge(e.from, e.letter, e.to)) c.edges.push_back(e);
  return c;
}

namespace {

struct Target {
  int point;
  std::optional<char> last;
};

bool has_target_prefix(const std::string& s, const std::set<std::string>& target_sites) {
  for (std::size_t len = 0; len <= s.size(); ++len)
    if (target_sites.count(s.substr(0, len))) return true;
  return false;
}

// Grows the labeling by a fresh branch ending at a site that carries `t`.
// Branches leave from assigned sites that are neither targets nor below one,
// so target sites stay pairwise prefix-incomparable.
std::optional<std::string> place(const EdgeGraph& g, const Core& c, std::map<std::string, int, WordOrder>& labels,
                                 std::set<std::string>& target_sites, const Target& t, int radius) {
  const auto& sig = g.signature();
  const auto letters = sig.letters();
  const std::size_t L = letters.size();
  struct Node {
    std::string site;
    int point;
    int parent;
  };
  std::vector<Node> nodes;
  std::vector<std::deque<int>> buckets(radius + 1);
  for (const auto& [s, v] : labels) {
    if (static_cast<int>(s.size()) >= radius || has_target_prefix(s, target_sites)) continue;
    char prev = s.empty() ? 0 : s.back();
    for (char i : letters) {
      if (!reduced_after(sig, prev, i) || labels.count(s + i)) continue;
      for (int w : g.out(v, i))
        if (c.contains(w) && g.has_bi_edge(v, i, w)) {
          nodes.push_back({s + i, w, -1});
          buckets[s.size() + 1].push_back(static_cast<int>(nodes.size()) - 1);
        }
    }
  }
  std::vector<bool> seen(static_cast<std::size_t>(g.size()) * L, false);
  for (int len = 1; len <= radius; ++len) {
    auto& q = buckets[len];
    while (!q.empty()) {
      int idx = q.front();
      q.pop_front();
      const Node node = nodes[idx];
      char last = node.site.back();
      auto key = static_cast<std::size_t>(node.point) * L + sig.letter_index(last);
      if (seen[key]) continue;
      seen[key] = true;
      if (node.point == t.point && (!t.last || *t.last == last)) {
        for (int k = idx; k >= 0; k = nodes[k].parent) labels.emplace(nodes[k].site, nodes[k].point);
        target_sites.insert(node.site);
        return node.site;
      }
      if (len == radius) continue;
      for (char i : letters) {
        if (!reduced_after(sig, last, i)) continue;
        for (int w : g.out(node.point, i))
          if (c.contains(w) && g.has_bi_edge(node.point, i, w)) {
            nodes.push_back({node.site + i, w, idx});
            buckets[len + 1].push_back(static_cast<int>(nodes.size()) - 1);
          }
      }
    }
  }
  return std::nullopt;
}

// Completes a labeling to all of Σ^(R+1) with the least core successor.
std::vector<int> fill(const EdgeGraph& g, const Core& c, std::map<std::string, int, WordOrder> labels, int radius) {
  const auto& sig = g.signature();
  const auto ball = shared_ball(sig, radius + 1);
  std::vector<int> out;
  for (const auto& u : ball->words()) {
    const auto& s = u.str();
    if (s.empty()) {
      out.push_back(labels.at(s));
      continue;
    }
    auto it = labels.find(s);
    if (it == labels.end()) {
      int parent = labels.at(s.substr(0, s.size() - 1));
      char i = s.back();
      int pick = -1;
      for (int w : g.out(parent, i))
        if (c.contains(w) && g.has_bi_edge(parent, i, w)) {
          pick = w;
          break;
        }
      it = labels.emplace(s, pick).first;
    }
    out.push_back(it->second);
  }
  return out;
}

// Non-backtracking core reachability from a root: (point, last letter) states.
std::vector<bool> core_reach(const EdgeGraph& g, const Core& c, int root) {
  const auto& sig = g.signature();
  const auto letters = sig.letters();
  const std::size_t L = letters.size();
  std::vector<bool> seen(static_cast<std::size_t>(g.size()) * L, false);
  std::deque<std::pair<int, char>> queue;
  auto expand = [&](int v, char prev) {
    for (std::size_t li = 0; li < L; ++li) {
      if (!reduced_after(sig, prev, letters[li])) continue;
      for (int w : g.out(v, letters[li])) {
        if (!c.contains(w) || !g.has_bi_edge(v, letters[li], w)) continue;
        auto key = static_cast<std::size_t>(w) * L + li;
        if (!seen[key]) {
          seen[key] = true;
          queue.emplace_back(w, letters[li]);
        }
      }
    }
  };
  expand(root, 0);
  while (!queue.empty()) {
    auto [v, last] = queue.front();
    queue.pop_front();
    expand(v, last);
  }
  return seen;
}

enum class Mode { plain, star, circ };

IbtResult decide(const EdgeGraph& g, int radius, Mode mode) {
  const auto& sig = g.signature();
  const int n = g.size();
  if (radius < n + 1)
    throw Error(ErrorCode::radius_too_small, "radius " + std::to_string(radius) + " < |Y| + 1 = " + std::to_string(n + 1));
  const auto c = core(g);
  IbtResult res;

  std::vector<int> outside;
  for (int v = 0; v < n; ++v)
    if (!c.contains(v)) outside.push_back(v);
  if (!outside.empty()) {
    res.refutation = IbtRefutation{outside, "points outside the core cannot sit on a total pseudo-orbit"};
    return res;
  }

  const auto letters = sig.letters();
  const std::size_t L = letters.size();
  // Candidate (root, extra targets) pairs in search order.
  struct Plan {
    int root;
    std::optional<int> y;
    std::vector<Target> extra;
  };
  std::vector<Plan> plans;
  for (int r : c.vertices) {
    if (mode == Mode::plain) plans.push_back({r, std::nullopt, {}});
    if (mode == Mode::circ) plans.push_back({r, r, {{r, std::nullopt}}});
    if (mode == Mode::star)
      for (int y : c.vertices)
        for (std::size_t i = 0; i < L; ++i)
          for (std::size_t j = i + 1; j < L; ++j) plans.push_back({r, y, {{y, letters[i]}, {y, letters[j]}}});
  }

  bool reachable_somewhere = false;
  std::map<int, std::vector<bool>> reach_cache;
  for (const auto& plan : plans) {
    auto& reach = reach_cache.try_emplace(plan.root, core_reach(g, c, plan.root)).first->second;
    auto reached = [&](const Target& t) {
      for (std::size_t li = 0; li < L; ++li)
        if ((!t.last || letters[li] == *t.last) && reach[static_cast<std::size_t>(t.point) * L + li]) return true;
      return false;
    };
    std::vector<Target> targets;
    for (int v = 0; v < n; ++v) targets.push_back({v, std::nullopt});
    targets.insert(targets.end(), plan.extra.begin(), plan.extra.end());
    if (!std::all_of(targets.begin(), targets.end(), reached)) continue;
    reachable_somewhere = true;

    std::map<std::string, int, WordOrder> labels{{"", plan.root}};
    std::set<std::string> target_sites;
    std::vector<std::string> placed;
    bool ok = true;
    for (const auto& t : targets) {
      auto s = place(g, c, labels, target_sites, t, radius);
      if (!s) {
        ok = false;
        break;
      }
      placed.push_back(*s);
    }
    if (!ok) continue;

    IbtWitness w;
    w.root = plan.root;
    for (int v = 0; v < n; ++v) w.sites.push_back(ReducedWord::from_reduced(sig, placed[v]));
    w.y = plan.y;
    for (std::size_t k = n; k < placed.size(); ++k) w.y_sites.push_back(ReducedWord::from_reduced(sig, placed[k]));
    w.labels = fill(g, c, labels, radius);
    if (g.has_points()) {
      PseudoOrbit::SiteMap sites;
      const auto ball = shared_ball(sig, radius + 1);
      for (std::size_t k = 0; k < ball->size(); ++k) sites.emplace((*ball)[k].str(), g.points()[w.labels[k]]);
      w.orbit = PseudoOrbit(sig, std::move(sites));
      w.report = validate_pseudo_orbit(*w.orbit, g.epsilon(), g.depth());
    }
    res.witnessed = true;
    res.witness = std::move(w);
    return res;
  }
  if (reachable_somewhere)
    throw Error(ErrorCode::radius_too_small,
                "targets are reachable in the core but could not be placed within radius " + std::to_string(radius));
  std::string why = mode == Mode::plain  ? "no core vertex reaches every point"
                    : mode == Mode::star ? "no core vertex reaches every point and some y by two distinct final letters"
                                         : "no point y reaches every point and returns to itself";
  res.refutation = IbtRefutation{{}, why};
  return res;
}

}  // namespace

IbtResult is_ibt(const EdgeGraph& g, int radius) { return decide(g, radius, Mode::plain); }

IbtResult is_ibt_star(const EdgeGraph& g, int radius) {
  if (!g.signature().is_group()) throw Error(ErrorCode::monoid_has_no_inverses, "IBT* is defined for free groups");
  return decide(g, radius, Mode::star);
}

IbtResult is_ibt_circ(const EdgeGraph& g, int radius) {
  if (g.signature().is_group()) throw Error(ErrorCode::signature_mismatch, "IBT° is defined for free monoids");
  return decide(g, radius, Mode::circ);
}

bool ibt_witness_is_valid(const EdgeGraph& g, const IbtWitness& w, int radius, bool star, bool circ,
                          std::string* why) {
  auto fail = [&](const std::string& m) {
    if (why) *why = m;
    return false;
  };
  const auto& sig = g.signature();
  const auto ball = shared_ball(sig, radius + 1);
  if (w.labels.size() != ball->size()) return fail("labels do not cover the ball");
  if (w.labels[0] != w.root) return fail("root label");
  for (std::size_t k = 0; k < ball->size(); ++k) {
    const auto& u = (*ball)[k];
    for (char i : sig.letters()) {
      auto ui = concat(u, letter_word(sig, i));
      auto j = ball->index_of(ui.str());
      if (!j) continue;
      if (!g.has_edge(w.labels[k], i, w.labels[*j])) return fail("step " + u.human() + " -" + i + "-> is not an edge");
    }
  }
  if (static_cast<int>(w.sites.size()) != g.size()) return fail("one site per point");
  std::vector<ReducedWord> all = w.sites;
  all.insert(all.end(), w.y_sites.begin(), w.y_sites.end());
  auto label_at = [&](const ReducedWord& u) -> std::optional<int> {
    auto j = ball->index_of(u.str());
    if (!j) return std::nullopt;
    return w.labels[*j];
  };
  for (int v = 0; v < g.size(); ++v)
    if (label_at(w.sites[v]) != v) return fail("site of point " + std::to_string(v));
  for (std::size_t a = 0; a < all.size(); ++a) {
    if (all[a].is_identity()) return fail("a target sits at e");
    for (std::size_t b = 0; b < all.size(); ++b)
      if (a != b && is_prefix(all[a], all[b])) return fail("target sites are prefix-comparable");
  }
  if (star) {
    if (!w.y || w.y_sites.size() != 2) return fail("star witness needs y at two sites");
    for (const auto& s : w.y_sites)
      if (label_at(s) != *w.y) return fail("y site label");
    if (w.y_sites[0].last() == w.y_sites[1].last()) return fail("y sites end in the same letter");
  }
  if (circ) {
    if (!w.y || w.y_sites.size() != 1) return fail("circ witness needs y at one site");
    if (w.root != *w.y || label_at(w.y_sites[0]) != *w.y) return fail("circ witness labels");
  }
  return true;
}

}  // namespace treeshift
