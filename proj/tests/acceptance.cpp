// Acceptance runner: one PASS/FAIL line per criterion. Every check here
// recomputes its expectation without going through the code path it judges
// wherever that is practical.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "sweep.hpp"
#include "treeshift/fixtures.hpp"
#include "treeshift/limits.hpp"

using namespace treeshift;

namespace {

const Signature F2 = Signature::group(2);
const Signature H2 = Signature::monoid(2);

struct Outcome {
  bool pass = true;
  std::ostringstream note;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) {
      pass = false;
      note.str("");
      note << what;
    }
  }
};

int failures = 0;

void criterion(int id, const char* title, const std::function<void(Outcome&)>& body) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.pass = false;
    o.note.str("");
    o.note << "exception: " << e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!o.pass) ++failures;
  std::printf("%s %2d %s (%.1fs): %s\n", o.pass ? "PASS" : "FAIL", id, title, secs, o.note.str().c_str());
  std::fflush(stdout);
}

// ---- 1: word algebra -------------------------------------------------------

std::string random_raw(std::mt19937& rng, Signature sig, int max_len) {
  const auto letters = sig.letters();
  std::uniform_int_distribution<int> len(0, max_len), pick(0, static_cast<int>(letters.size()) - 1);
  std::string s;
  for (int n = len(rng); n > 0; --n) s += letters[pick(rng)];
  return s;
}

bool freely_reduced(const std::string& s) {
  for (std::size_t i = 1; i < s.size(); ++i)
    if (s[i] == inverse_letter(s[i - 1])) return false;
  return true;
}

// Closed forms: group 1 + 2r((2r-1)^(n-1) - 1)/(2r - 2), monoid (r^n - 1)/(r - 1).
std::size_t ball_formula(Signature sig, int n) {
  if (n <= 0) return 0;
  const std::size_t r = static_cast<std::size_t>(sig.rank);
  std::size_t total = 1, shell = 1;
  for (int len = 1; len < n; ++len) {
    shell = sig.is_group() ? (len == 1 ? 2 * r : shell * (2 * r - 1)) : shell * r;
    total += shell;
  }
  return total;
}

void word_algebra(Outcome& o) {
  std::mt19937 rng(20261016);
  std::size_t instances = 0;
  for (int t = 0; t < 10000; ++t) {
    const int rank = 1 + t % 3;
    const auto sig = (t / 3) % 2 ? Signature::monoid(rank) : Signature::group(rank);
    auto u = reduce(random_raw(rng, sig, 8), sig), v = reduce(random_raw(rng, sig, 8), sig),
         w = reduce(random_raw(rng, sig, 8), sig);
    const auto e = ReducedWord::identity(sig);
    o.require(freely_reduced(u.str()), "reduce left a cancelling pair");
    o.require(concat(concat(u, v), w) == concat(u, concat(v, w)), "associativity");
    o.require(concat(u, e) == u && concat(e, u) == u, "identity");
    // Reduction respects concatenation of raw strings.
    o.require(reduce(u.str() + v.str(), sig) == concat(u, v), "reduce(uv) != u*v");
    if (sig.is_group()) {
      o.require(concat(u, invert(u)).is_identity() && concat(invert(u), u).is_identity(), "inverse");
      o.require(invert(concat(u, v)) == concat(invert(v), invert(u)), "inverse of a product");
    } else {
      o.require(concat(u, v).length() == u.length() + v.length(), "monoid length is additive");
    }
    const int n = 1 + static_cast<int>(rng() % (sig.rank == 3 ? 5 : 7));
    const auto b = shared_ball(sig, n);
    o.require(b->size() == ball_formula(sig, n) && ball_size(sig, n) == ball_formula(sig, n),
              "ball size formula at " + sig.to_string() + " n=" + std::to_string(n));
    ++instances;
  }
  const auto s3 = ball(3, F2).size();
  o.require(s3 == 17, "|Sigma^3| = " + std::to_string(s3));
  if (o.pass) o.note << instances << " instances, |Sigma^3| = " << s3 << " for group:2";
}

// ---- 2: metric -------------------------------------------------------------

Configuration random_override(std::mt19937& rng, Signature sig, const Configuration& base, int depth, double p) {
  std::map<std::string, Symbol, WordOrder> entries;
  std::bernoulli_distribution coin(p);
  for (const auto& u : shared_ball(sig, depth)->words())
    if (coin(rng)) entries.emplace(u.str(), 1 - base.eval(u));
  return Configuration::override_entries(base, depth, std::move(entries));
}

// Independent distance on Σ^D: exponent of the first differing shell.
int first_difference(const Configuration& x, const Configuration& y, int D) {
  for (const auto& u : ball(D, x.signature()))
    if (x.eval(u) != y.eval(u)) return static_cast<int>(u.length());
  return D;
}

void metric(Outcome& o) {
  std::mt19937 rng(7);
  const int D = 6;
  std::size_t pairs = 0, lipschitz = 0;
  for (int t = 0; t < 1000; ++t) {
    const auto sig = t % 2 ? H2 : F2;
    const auto base = t % 4 < 2 ? Configuration::constant(sig, 0) : parity_point(sig, t % 3);
    // y is a sparse perturbation of x so that distances spread over 2^-0 .. 2^-6.
    auto x = random_override(rng, sig, base, 5, 0.05);
    auto y = random_override(rng, sig, x, 6, 0.02);
    auto z = random_override(rng, sig, x, 6, 0.02);
    auto dxy = distance(x, y, D), dyz = distance(y, z, D), dxz = distance(x, z, D);
    const int ref = first_difference(x, y, D);
    o.require(dxy.exponent == ref && dxy.is_exact() == (ref < D), "distance disagrees with direct comparison");
    o.require(dxz.key() >= max_distance(dxy, dyz).key(), "ultrametric inequality");
    for (char i : sig.letters()) {
      auto d = distance(shift(x, i), shift(y, i), D);
      o.require(d.at_most_value(Dyadic{std::max(dxy.exponent - 1, 0)}), "one-letter Lipschitz bound");
      ++lipschitz;
    }
    for (const auto& u : ball(4, sig)) {
      auto d = distance(shift(x, u), shift(y, u), D);
      const int k = std::max(dxy.exponent - static_cast<int>(u.length()), 0);
      o.require(d.at_most_value(Dyadic{k}), "|u|-shift bound at u=" + u.human());
      ++lipschitz;
    }
    ++pairs;
  }
  if (o.pass) o.note << pairs << " pairs at D=" << D << ", " << lipschitz << " shift bounds";
}

// ---- 3, 4: shadowing sweep and tracing lemma -------------------------------

std::vector<std::pair<std::string, sweep::SweepResult>> sweep_results() {
  static std::vector<std::pair<std::string, sweep::SweepResult>> cache;
  if (cache.empty())
    for (const auto& c : {sweep::two_point_candidates(), sweep::golden_mean_candidates()})
      cache.emplace_back(c.name, sweep::run_sweep(c, 3));
  return cache;
}

void shadowing(Outcome& o) {
  for (const auto& [name, r] : sweep_results()) {
    o.require(r.orbits > 0, name + ": no pseudo-orbits enumerated");
    o.require(r.validation_mismatches == 0, name + ": validator rejected an enumerated orbit");
    o.require(r.shadow_failures == 0, name + ": " + std::to_string(r.shadow_failures) + " shadow failures");
    o.note << name << " " << r.base_sets << " base sets, " << r.orbits << " orbits, " << r.shadow_failures
           << " failures; ";
  }
}

void tracing(Outcome& o) {
  for (const auto& [name, r] : sweep_results()) {
    o.require(r.tracing_checks > 0, name + ": nothing checked");
    o.require(r.tracing_failures == 0, name + ": " + std::to_string(r.tracing_failures) + " failures");
    o.note << name << " " << r.tracing_checks << " checks, " << r.tracing_failures << " failures; ";
  }
}

// ---- 5: non-SFT obstruction ------------------------------------------------

void counterexample(Outcome& o) {
  auto ce = counterexample_asymptotic(F2, 'a', 5);
  const int m = ce.system.step();
  auto prof = asymptotic_defect(ce.orbit, m + 2);
  o.require(prof.size() == 5, "profile covers " + std::to_string(prof.size()) + " shells");
  // Asymptotic: the defect vanishes past the root shell.
  for (std::size_t r = 1; r < prof.size(); ++r)
    o.require(prof[r].max_defect.less_than(Dyadic{m + 1}), "shell " + std::to_string(r) + " defect too large");
  o.require(ce.certificate.holds, "certificate does not hold");
  o.require(ce.certificate.points.size() == 2, "system should have exactly two points");
  const auto e = ReducedWord::identity(F2);
  for (std::size_t p = 0; p < ce.certificate.mismatches.size(); ++p) {
    const auto& row = ce.certificate.mismatches[p];
    o.require(row.size() == 5, "mismatch row does not cover shells 1..5");
    for (const auto& mm : row) {
      o.require(!mm.distance.less_than(Dyadic{1}), "shell defect below 2^-1");
      // Recheck: the constant point against the orbit value at the site, at e.
      const Symbol point_value = ce.certificate.points[p][0];
      o.require(point_value != sweep::orbit_value(ce.orbit.sites(), mm.site, e),
                "no disagreement at site " + mm.site.human());
    }
  }
  if (o.pass) o.note << "asymptotic pseudo-orbit, both points defect >= 2^-1 on shells 1..5";
}

// ---- 6: ICT but not CICT ---------------------------------------------------

void ict_not_cict(Outcome& o) {
  auto fam = ict_not_cict_family(Direction::corrected);
  o.require(fam.points.size() >= 5, "family too small");
  auto g = edge_graph(fam.points, Dyadic{3}, 5);
  o.require(is_ict(g).holds, "family is not ICT");
  auto c = is_cict(g);
  o.require(!c.holds, "family is CICT");
  o.require(c.refutation && c.refutation->point == 0, "refutation not at x0");
  if (!c.refutation) return;
  // Edge labels at x0 straight from the graph.
  std::set<char> in, out;
  for (const auto& e : g.edges()) {
    if (e.to == 0) in.insert(e.letter);
    if (e.from == 0) out.insert(e.letter);
  }
  o.require(in == std::set<char>{'b'}, "in-edges of x0 are not all b");
  o.require(out == std::set<char>{'B'}, "out-edges of x0 are not all B");
  o.require(std::set<char>(c.refutation->in_letters.begin(), c.refutation->in_letters.end()) == in &&
                std::set<char>(c.refutation->out_letters.begin(), c.refutation->out_letters.end()) == out,
            "refutation letters differ from the graph");
  if (o.pass) o.note << fam.points.size() << " points, ICT, CICT refuted at x0: in {b}, out {B}";
}

// ---- 7: monoid collapse ----------------------------------------------------

Configuration random_automaton(std::mt19937& rng, Signature sig) {
  const int states = 1 + static_cast<int>(rng() % 3);
  std::vector<std::vector<int>> tr(states, std::vector<int>(sig.letter_count()));
  std::vector<Symbol> out(states);
  for (int s = 0; s < states; ++s) {
    for (auto& t : tr[s]) t = static_cast<int>(rng() % states);
    out[s] = static_cast<Symbol>(rng() % 2);
  }
  return Configuration::automaton(WordAutomaton(sig, 0, tr, out));
}

void monoid_collapse(Outcome& o) {
  std::mt19937 rng(4242);
  int holds = 0, fixtures = 0;
  for (int t = 0; t < 100; ++t) {
    const auto sig = Signature::monoid(1 + t % 2);
    const int D = 2 + static_cast<int>(rng() % 3);
    // Points must be distinct on Σ^D; the first of each block is kept.
    std::vector<Configuration> pts;
    std::set<Block> seen;
    const int n = 2 + static_cast<int>(rng() % 4);
    if (t % 2) {
      // The whole orbit of one automaton point: shift-closed, often transitive.
      auto x = random_automaton(rng, sig);
      for (const auto& u : ball(4, sig))
        if (seen.insert(central_block(shift(x, u), D)).second) pts.push_back(shift(x, u));
    } else {
      for (int i = 0; i < n; ++i) {
        auto x = random_automaton(rng, sig);
        if (rng() % 3 == 0) x = random_override(rng, sig, x, 2, 0.3);
        if (seen.insert(central_block(x, D)).second) pts.push_back(x);
      }
    }
    const Dyadic eps{1 + static_cast<int>(rng() % (D - 1))};
    auto g = edge_graph(pts, eps, D);
    const bool ict = is_ict(g).holds, cict = is_cict(g).holds;
    o.require(ict == cict, "fixture " + std::to_string(t) + ": ICT " + std::to_string(ict) + " vs CICT " +
                               std::to_string(cict));
    holds += ict;
    ++fixtures;
  }
  if (o.pass) o.note << fixtures << " fixtures, " << holds << " chain transitive, verdicts agree on all";
}

// ---- 8-11: realizations ----------------------------------------------------

struct Fixture {
  std::string name;
  std::vector<Configuration> Y;
  ShiftSystem sys;
};

std::vector<Fixture> group_fixtures() {
  return {{"zero/two-point", {Configuration::constant(F2, 0)}, two_point_system(F2)},
          {"parity/golden-mean", {parity_point(F2, 0), parity_point(F2, 1)}, golden_mean_system(F2)},
          {"mod3/full-2", {mod3_point(F2, 0), mod3_point(F2, 1), mod3_point(F2, 2)}, full_shift(F2, 2)}};
}

std::vector<Fixture> monoid_fixtures() {
  return {{"parity/golden-mean", {parity_point(H2, 0), parity_point(H2, 1)}, golden_mean_system(H2)},
          {"zero/golden-mean", {Configuration::constant(H2, 0)}, golden_mean_system(H2)},
          {"mod3/full-2", {mod3_point(H2, 0), mod3_point(H2, 1), mod3_point(H2, 2)}, full_shift(H2, 2)}};
}

using BlockSet = std::set<std::vector<Symbol>>;

std::vector<Symbol> block_at(const Configuration& x, const ReducedWord& u, int k) {
  std::vector<Symbol> e;
  for (const auto& v : ball(k, x.signature())) e.push_back(x.eval(concat(u, v)));
  return e;
}

// Blocks along the realized range by plain string extension.
BlockSet recompute(LimitKind kind, const Configuration& x, const ReducedWord& w, int n, int N, int k) {
  const auto sig = x.signature();
  BlockSet out;
  auto word = [&](const std::string& s) { return ReducedWord::from_reduced(sig, s); };
  if (kind == LimitKind::omega_w) {
    for (int j = n + 1; j <= N; ++j) out.insert(block_at(x, word(w.str().substr(0, j)), k));
    return out;
  }
  std::function<void(std::string)> grow = [&](std::string u) {
    if (static_cast<int>(u.size()) > n) out.insert(block_at(x, word(u), k));
    if (static_cast<int>(u.size()) == N) return;
    for (char c : sig.letters())
      if (u.empty() || c != inverse_letter(u.back())) grow(u + c);
  };
  grow(w.str().substr(0, n));
  return out;
}

// Hausdorff exponent between two block sets of depth k, from first differing shells.
int hausdorff_exponent(Signature sig, const BlockSet& a, const BlockSet& b, int k) {
  const auto bl = shared_ball(sig, k);
  auto d = [&](const std::vector<Symbol>& p, const std::vector<Symbol>& q) {
    for (std::size_t i = 0; i < p.size(); ++i)
      if (p[i] != q[i]) return static_cast<int>((*bl)[i].length());
    return k;
  };
  int worst = k;
  for (const auto* side : {&a, &b}) {
    const auto* other = side == &a ? &b : &a;
    for (const auto& p : *side) {
      int best = 0;
      for (const auto& q : *other) best = std::max(best, d(p, q));
      worst = std::min(worst, best);
    }
  }
  return worst;
}

struct Realized {
  std::string label;
  Fixture fixture;
  RealizationOutput out;
};

std::vector<Realized>& realized() {
  static std::vector<Realized> all;
  return all;
}

constexpr int K = 3;

void check_round_trip(Outcome& o, const Fixture& f, const RealizationOutput& r, const std::string& label) {
  BlockSet want;
  for (const auto& y : f.Y) want.insert(central_block(y, K).entries());
  auto got = recompute(r.kind, r.point, r.word_prefix, r.inner, r.outer, K);
  const int h = hausdorff_exponent(f.Y.front().signature(), want, got, K);
  o.require(h >= K, label + ": recomputed Hausdorff 2^-" + std::to_string(h));
  o.require(r.hausdorff.at_most_value(Dyadic{K}), label + ": reported Hausdorff " + r.hausdorff.to_string());
  o.require(r.within_bound, label + ": not within bound");
  o.require(member_to_depth(r.point, f.sys, r.declared_depth), label + ": point leaves the system");
  o.note << label << " (" << r.inner << "," << r.outer << "] 2^-" << h << "; ";
}

void cict_round_trip(Outcome& o) {
  for (const auto& f : group_fixtures()) {
    auto g = edge_graph(f.Y, Dyadic{K + 1}, K + 2);
    o.require(is_cict(g).holds, f.name + ": fixture is not CICT");
    auto r = realize_cict_as_omega_w(f.Y, f.sys, K);
    check_round_trip(o, f, r, f.name);
    realized().push_back({"cict " + f.name, f, r});
  }
}

void ibt_round_trip(Outcome& o) {
  for (const auto& f : group_fixtures()) {
    auto r = realize_ibt_as_omega_Fw(f.Y, f.sys, K);
    check_round_trip(o, f, r, "star " + f.name);
    realized().push_back({"ibt-star " + f.name, f, r});
  }
  for (const auto& f : monoid_fixtures()) {
    auto r = realize_ibt_as_omega_Fw(f.Y, f.sys, K);
    check_round_trip(o, f, r, "circ " + f.name);
    realized().push_back({"ibt-circ " + f.name, f, r});
  }
}

bool subset(const std::vector<Block>& a, const std::vector<Block>& b) {
  std::set<Block> s(b.begin(), b.end());
  for (const auto& x : a)
    if (!s.count(x)) return false;
  return true;
}

void nesting(Outcome& o) {
  o.require(!realized().empty(), "no realizations from criteria 8-9");
  std::size_t checked = 0;
  for (const auto& [label, f, r] : realized()) {
    const auto sig = r.point.signature();
    const int n = r.inner;
    const int Nw = std::min(r.outer, static_cast<int>(r.word_prefix.length()));
    o.require(Nw > n, label + ": word prefix too short for omega_w");
    if (Nw <= n) continue;
    // Word ranges: w|_k, n < k <= Nw, extend w|_n; those have length in (n, N].
    auto ww = candidate_words(LimitKind::omega_w, sig, r.word_prefix, n, Nw);
    auto wf = candidate_words(LimitKind::omega_Fw, sig, r.word_prefix, n, r.outer);
    std::set<std::string> fset;
    for (const auto& u : wf) {
      fset.insert(u.str());
      o.require(is_prefix(r.word_prefix.prefix(n), u) && static_cast<int>(u.length()) > n &&
                    static_cast<int>(u.length()) <= r.outer,
                label + ": F_w word outside the omega range");
    }
    for (const auto& u : ww) o.require(fset.count(u.str()) > 0, label + ": w-prefix missing from F_w range");
    // Members.
    auto aw = omega_w_approx(r.point, r.word_prefix, n, Nw, K);
    auto af = omega_Fw_approx(r.point, r.word_prefix, n, r.outer, K);
    o.require(subset(aw.blocks(), af.blocks()), label + ": omega_w member outside omega_Fw");
    for (const auto& m : af.members) {
      const int len = static_cast<int>(m.word.length());
      o.require(len > n && len <= r.outer && central_block(shift(r.point, m.word), K) == m.block,
                label + ": omega_Fw member not produced inside the omega range");
    }
    const auto full = ball_size(sig, r.outer + 1);
    if (full && *full <= 200000) {
      auto ao = omega_approx(r.point, n, r.outer, K);
      o.require(subset(af.blocks(), ao.blocks()), label + ": omega_Fw member outside omega");
    }
    ++checked;
  }
  if (o.pass) o.note << checked << " approximations nested";
}

void invariance(Outcome& o) {
  o.require(!realized().empty(), "no realizations from criteria 8-9");
  for (const auto& [label, f, r] : realized()) {
    o.require(r.approximation_fine.depth >= K + 1, label + ": fine approximation too shallow");
    auto rep = invariance_check(r.approximation_fine, &f.sys, K);
    o.require(rep.passed, label + ": " + (rep.failures.empty() ? std::string("failed")
                                                                : rep.failures.front().reason));
    o.note << label << " " << rep.checks << " checks; ";
  }
}

// ---- 12: determinism -------------------------------------------------------

std::string shell(const std::string& cmd) {
  std::string out;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return out;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
  pclose(p);
  return out;
}

void determinism(Outcome& o) {
  const std::string bin = TREESHIFT_BINARY;
  const std::vector<std::string> invocations = {
      "ball --sig group:2 --n 3 --count",
      "words --random 8 --length 7 --seed 5",
      "words --random 8 --length 7 --sig monoid:3 --seed 5",
      "example two-point-no-shadow --verify --seed 1",
      "example ict-not-cict --direction corrected --verify --seed 1",
      "edges --points example:ict-not-cict --direction corrected --epsilon 2^-3 --depth 5 --seed 1",
      "ict --points example:ict-not-cict --direction corrected --epsilon 2^-3 --depth 5 --seed 1",
      "cict --points example:ict-not-cict --direction corrected --epsilon 2^-3 --depth 5 --seed 1",
      "realize --mode cict --points mod3:0,mod3:1,mod3:2 --system full:2 --resolution 2^-3 --seed 1",
      "realize --mode ibt-star --points parity:0,parity:1 --system golden-mean --resolution 2^-3 --seed 1",
      "realize --mode ibt-circ --sig monoid:2 --points parity:0,parity:1 --system golden-mean --resolution 2^-3 "
      "--seed 1",
      "render --config parity:0 --depth 3 --format dot --seed 1",
  };
  for (const auto& args : invocations) {
    const auto cmd = bin + " " + args + " 2>&1";
    const auto a = shell(cmd), b = shell(cmd);
    o.require(!a.empty(), "no output: " + args);
    o.require(a == b, "outputs differ: " + args);
  }
  if (o.pass) o.note << invocations.size() << " invocations byte-identical";
}

}  // namespace

int main() {
  criterion(1, "word algebra", word_algebra);
  criterion(2, "metric", metric);
  criterion(3, "SFT shadowing sweep", shadowing);
  criterion(4, "tracing lemma", tracing);
  criterion(5, "non-SFT obstruction", counterexample);
  criterion(6, "ICT but not CICT", ict_not_cict);
  criterion(7, "monoid CICT equals ICT", monoid_collapse);
  criterion(8, "CICT realization round trip", cict_round_trip);
  criterion(9, "IBT realization round trip", ibt_round_trip);
  criterion(10, "inclusion chain", nesting);
  criterion(11, "invariance", invariance);
  criterion(12, "CLI determinism", determinism);
  std::printf("%d of 12 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
