#include "treeshift/limits.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace treeshift {

const char* limit_kind_name(LimitKind kind) {
  switch (kind) {
    case LimitKind::omega: return "omega";
    case LimitKind::omega_w: return "omega-w";
    case LimitKind::omega_Fw: return "omega-fw";
  }
  return "?";
}

LimitKind parse_limit_kind(const std::string& text) {
  if (text == "omega") return LimitKind::omega;
  if (text == "omega-w") return LimitKind::omega_w;
  if (text == "omega-fw") return LimitKind::omega_Fw;
  throw Error(ErrorCode::usage, "unknown limit kind '" + text + "' (omega, omega-w, omega-fw)");
}

std::vector<Block> LimitSetApproximation::blocks() const {
  std::vector<Block> out;
  for (const auto& m : members) out.push_back(m.block);
  return out;
}

std::vector<ReducedWord> candidate_words(LimitKind kind, Signature sig, const std::optional<ReducedWord>& w, int n,
                                         int N) {
  if (n < 0 || n >= N) throw Error(ErrorCode::construction_error, "approximation range needs 0 <= n < N");
  std::vector<ReducedWord> out;
  if (kind == LimitKind::omega) {
    for (auto& u : ball(N + 1, sig))
      if (static_cast<int>(u.length()) > n) out.push_back(std::move(u));
    return out;
  }
  if (!w) throw Error(ErrorCode::construction_error, std::string(limit_kind_name(kind)) + " needs a word");
  if (!(w->signature() == sig)) throw Error(ErrorCode::signature_mismatch, "word signature differs from the point");
  if (kind == LimitKind::omega_w) {
    if (static_cast<int>(w->length()) < N)
      throw Error(ErrorCode::construction_error, "word prefix has " + std::to_string(w->length()) +
                                                     " letters, omega-w needs N = " + std::to_string(N));
    for (int k = n + 1; k <= N; ++k) out.push_back(w->prefix(k));
    return out;
  }
  if (static_cast<int>(w->length()) < n)
    throw Error(ErrorCode::construction_error, "word prefix has " + std::to_string(w->length()) +
                                                   " letters, omega-fw needs n = " + std::to_string(n));
  const auto base = w->prefix(n);
  for (const auto& v : ball(N - n + 1, sig)) {
    if (v.is_identity()) continue;
    if (sig.is_group() && !base.is_identity() && v.first() == inverse_letter(base.last())) continue;
    out.push_back(concat(base, v));
  }
  return out;
}

LimitSetApproximation limit_approx(LimitKind kind, const Configuration& x, const std::optional<ReducedWord>& w, int n,
                                   int N, int D) {
  if (D < 1) throw Error(ErrorCode::depth_too_small, "approximation depth must be >= 1");
  LimitSetApproximation a{kind, n, N, D, {}, 0};
  std::set<std::vector<Symbol>> seen;
  for (const auto& u : candidate_words(kind, x.signature(), w, n, N)) {
    ++a.candidates;
    auto b = central_block(shift(x, u), D);
    if (seen.insert(b.entries()).second) a.members.push_back({std::move(b), u});
  }
  return a;
}

LimitSetApproximation omega_approx(const Configuration& x, int n, int N, int D) {
  return limit_approx(LimitKind::omega, x, std::nullopt, n, N, D);
}

LimitSetApproximation omega_w_approx(const Configuration& x, const ReducedWord& w, int n, int N, int D) {
  return limit_approx(LimitKind::omega_w, x, w, n, N, D);
}

LimitSetApproximation omega_w_approx(const Configuration& x, const EventuallyPeriodicWord& w, int n, int N, int D) {
  return limit_approx(LimitKind::omega_w, x, word_prefix(w, static_cast<std::size_t>(std::max(N, 0))), n, N, D);
}

LimitSetApproximation omega_Fw_approx(const Configuration& x, const ReducedWord& w, int n, int N, int D) {
  return limit_approx(LimitKind::omega_Fw, x, w, n, N, D);
}

LimitSetApproximation omega_Fw_approx(const Configuration& x, const EventuallyPeriodicWord& w, int n, int N, int D) {
  return limit_approx(LimitKind::omega_Fw, x, word_prefix(w, static_cast<std::size_t>(std::max(n, 0))), n, N, D);
}

StabilizationScan stabilization_scan(LimitKind kind, const Configuration& x, const std::optional<ReducedWord>& w,
                                     int D, int N_max) {
  if (N_max < 1) throw Error(ErrorCode::construction_error, "scan needs N_max >= 1");
  StabilizationScan scan{kind, D, N_max, {}, std::nullopt};
  std::vector<Block> prev;
  for (int n = 0; n < N_max; ++n) {
    auto a = limit_approx(kind, x, w, n, N_max, D);
    auto blocks = a.blocks();
    ScanRow row{n, blocks.size(), std::nullopt};
    if (n > 0) {
      row.step = hausdorff(prev, blocks);
      if (!scan.stabilized_at && !row.step->is_exact()) scan.stabilized_at = n;
    }
    scan.rows.push_back(row);
    prev = std::move(blocks);
  }
  return scan;
}

namespace {

Block shift_block(const Block& b, char letter, int D) {
  const auto sig = b.signature();
  const auto head = letter_word(sig, letter);
  std::vector<Symbol> entries;
  for (const auto& v : shared_ball(sig, D)->words()) entries.push_back(b.at(concat(head, v)));
  return Block(sig, D, std::move(entries));
}

}  // namespace

InvarianceReport invariance_check(const LimitSetApproximation& approx, const ShiftSystem* sys, int D) {
  if (D < 1 || approx.depth < D + 1)
    throw Error(ErrorCode::depth_too_small, "invariance at depth " + std::to_string(D) +
                                                " needs an approximation of depth >= " + std::to_string(D + 1));
  InvarianceReport rep{approx.kind, D, false, 0, {}};
  if (approx.members.empty()) {
    rep.passed = true;
    return rep;
  }
  const auto sig = approx.members.front().block.signature();
  // Admissibility needs blocks at least as deep as the step.
  const int adm_depth = sys ? std::min(approx.depth, std::max(D, sys->step())) : D;
  if (sys && adm_depth < sys->step())
    throw Error(ErrorCode::depth_too_small, "admissibility needs members of depth >= " + std::to_string(sys->step()));
  std::set<std::vector<Symbol>> members;
  for (const auto& m : approx.members) members.insert(m.block.restrict(D).entries());
  const auto letters = sig.letters();
  std::vector<std::vector<bool>> lands(approx.members.size(), std::vector<bool>(letters.size()));
  std::set<std::vector<Symbol>> images;
  for (std::size_t a = 0; a < approx.members.size(); ++a)
    for (std::size_t li = 0; li < letters.size(); ++li) {
      ++rep.checks;
      auto s = shift_block(approx.members[a].block, letters[li], D);
      lands[a][li] = members.count(s.entries()) > 0;
      images.insert(s.entries());
    }
  for (std::size_t a = 0; a < approx.members.size(); ++a) {
    const auto& m = approx.members[a];
    if (sys && !is_admissible(m.block.restrict(adm_depth), *sys))
      rep.failures.push_back({a, m.word, std::nullopt, "member is not admissible"});
    if (approx.kind != LimitKind::omega_w) {
      for (std::size_t li = 0; li < letters.size(); ++li)
        if (!lands[a][li]) rep.failures.push_back({a, m.word, letters[li], "shifted member is not a member"});
      continue;
    }
    auto hits = std::count(lands[a].begin(), lands[a].end(), true);
    if (sig.is_group()) {
      if (hits < 2)
        rep.failures.push_back({a, m.word, std::nullopt, std::to_string(hits) + " letter(s) land on members, need 2"});
    } else {
      if (hits < 1) rep.failures.push_back({a, m.word, std::nullopt, "no letter lands on a member"});
      if (!images.count(m.block.restrict(D).entries()))
        rep.failures.push_back({a, m.word, std::nullopt, "member has no predecessor"});
    }
  }
  rep.passed = rep.failures.empty();
  return rep;
}

namespace {

// Indices of the first point of each class of points agreeing on Σ^depth.
std::vector<int> dedupe(const std::vector<Configuration>& pts, int depth) {
  std::set<std::vector<Symbol>> seen;
  std::vector<int> out;
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (seen.insert(central_block(pts[i], depth).entries()).second) out.push_back(static_cast<int>(i));
  return out;
}

std::vector<Configuration> pick(const std::vector<Configuration>& pts, const std::vector<int>& idx) {
  std::vector<Configuration> out;
  for (int i : idx) out.push_back(pts[i]);
  return out;
}

std::size_t lcp(const std::string& a, const std::string& b) {
  std::size_t k = 0;
  while (k < a.size() && k < b.size() && a[k] == b[k]) ++k;
  return k;
}

std::string join(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

// A finished construction: sites labeled by Y indices, the word, the range.
struct Construction {
  std::map<std::string, int, WordOrder> labels;
  std::optional<ReducedWord> w;
  int inner = 0;
  int outer = 0;
  std::vector<RealizationStage> stages;
  std::vector<std::string> log;
};

constexpr int kMaxStages = 48;

// Chain stages: z_0 z_1 ... along t_1 t_2 ... with 𝒪(t_1..t_j) = z_j. Stage
// e has two-sided step defects below 2^-e (chains found one level finer).
// The last stage repeats until the range (n*, N*] sees its whole cover.
Construction build_cict(const std::vector<Configuration>& Y, const std::vector<int>& exps, int target,
                        int min_inner) {
  const auto sig = Y.front().signature();
  const int F = exps.back();
  const auto cov = dedupe(Y, F + 1);
  const auto P = pick(Y, cov);
  auto gF = edge_graph(P, Dyadic{F + 1}, F + 2);
  auto cict = is_cict(gF);
  if (!cict.holds) {
    std::string where = cict.refutation && cict.refutation->point
                            ? " at point " + std::to_string(cov[*cict.refutation->point])
                            : std::string();
    throw Error(ErrorCode::not_cict, "Y is not CICT at 2^-" + std::to_string(F + 1) + where + ": " +
                                         (cict.refutation ? cict.refutation->reason : std::string()));
  }
  const auto& i_of = cict.assignment->i;
  const auto& t_of = cict.assignment->t;

  Construction c;
  c.log.push_back("finest assignment at 2^-" + std::to_string(F + 1) + " over cover {" + join(cov) + "}");
  std::vector<int> z;  // indices into P
  std::string word;
  auto chain = [&](const EdgeGraph& g, int a, int b, RealizationStage& st) {
    auto ch = find_chain(g, a, b, {i_of[a], t_of[b], false});
    if (!ch) throw Error(ErrorCode::not_cict, "no constrained chain " + std::to_string(cov[a]) + " -> " + std::to_string(cov[b]));
    word += ch->word.str();
    z.insert(z.end(), ch->points.begin() + 1, ch->points.end());
    st.words.push_back(ch->word.str());
  };

  std::size_t region_start = 0;
  std::vector<int> final_cover;
  std::optional<EdgeGraph> final_graph;
  for (std::size_t s = 0; s < exps.size(); ++s) {
    const int e = exps[s];
    auto g = edge_graph(P, Dyadic{e + 1}, F + 2);
    auto cover = dedupe(P, e + 1);
    RealizationStage st{e, {}, {}, 0};
    for (int p : cover) st.cover.push_back(cov[p]);
    if (s == 0) {
      z.push_back(cover.front());
    } else {
      if (s + 1 == exps.size()) region_start = z.size() - 1;
      chain(g, z.back(), cover.front(), st);  // bridge into this stage
    }
    for (std::size_t q = 0; q + 1 < cover.size(); ++q) chain(g, cover[q], cover[q + 1], st);
    c.log.push_back("stage 2^-" + std::to_string(e) + ": cover {" + join(st.cover) + "}, " +
                    std::to_string(st.words.size()) + " chain(s)");
    c.stages.push_back(std::move(st));
    if (s + 1 == exps.size()) {
      final_cover = cover;
      final_graph.emplace(std::move(g));
    }
  }
  auto loop = [&] {
    RealizationStage st{F, c.stages.back().cover, {}, 0};
    chain(*final_graph, z.back(), final_cover.front(), st);
    for (std::size_t q = 0; q + 1 < final_cover.size(); ++q) chain(*final_graph, final_cover[q], final_cover[q + 1], st);
    c.stages.push_back(std::move(st));
    if (static_cast<int>(c.stages.size()) > kMaxStages * 8)
      throw Error(ErrorCode::resource_limit, "chain construction exceeded its stage budget");
  };

  c.inner = std::max(static_cast<int>(region_start) + target, min_inner);
  // N*: the first index after n* by which every final cover point has shown up.
  std::set<int> need(final_cover.begin(), final_cover.end());
  int N = c.inner;
  while (!need.empty()) {
    ++N;
    while (static_cast<int>(z.size()) <= N) loop();
    need.erase(z[N]);
  }
  c.outer = N;
  while (static_cast<int>(z.size()) <= c.outer + target) loop();

  c.w = ReducedWord::from_reduced(sig, word);
  for (std::size_t j = 0; j < z.size(); ++j) c.labels.emplace(word.substr(0, j), cov[z[j]]);
  c.log.push_back("path of length " + std::to_string(word.size()) + ", range (" + std::to_string(c.inner) + ", " +
                  std::to_string(c.outer) + "]");
  return c;
}

struct IbtStage {
  int exponent;
  std::vector<int> cov;  // Y indices
  IbtWitness witness;
  int radius;
};

IbtStage ibt_stage(const std::vector<Configuration>& Y, int e, const WitnessHook& hook, int index) {
  const bool group = Y.front().signature().is_group();
  auto cov = dedupe(Y, e + 1);
  auto g = edge_graph(pick(Y, cov), Dyadic{e}, e + 1);
  const int n = static_cast<int>(cov.size());
  std::optional<IbtResult> last;
  for (int R = n + 1; R <= n + 4; ++R) {
    try {
      last = group ? is_ibt_star(g, R) : is_ibt_circ(g, R);
    } catch (const Error& err) {
      if (err.code() == ErrorCode::radius_too_small) continue;
      throw;
    }
    if (last->witnessed) {
      IbtStage st{e, cov, *last->witness, R};
      if (hook) hook(index, st.witness);
      return st;
    }
    break;
  }
  std::string why = last && last->refutation ? last->refutation->reason : "no witness within the radius budget";
  throw Error(group ? ErrorCode::not_ibt_star : ErrorCode::not_ibt_circ,
              std::string(group ? "IBT*" : "IBT°") + " not witnessed at 2^-" + std::to_string(e) + ": " + why);
}

// Stitches stage witnesses as in the IBT constructions. Returns false if the
// stage list does not yet reach far enough for the range.
struct Stitched {
  std::map<std::string, int, WordOrder> labels;
  ReducedWord w;
  std::vector<std::vector<ReducedWord>> x_sites;  // per stage, site of each cover point
  std::vector<ReducedWord> anchors_w;              // w_s (group) or P_s (monoid), s = 0..S
};

Stitched stitch(Signature sig, const std::vector<IbtStage>& stages) {
  Stitched out{{}, ReducedWord::identity(sig), {}, {ReducedWord::identity(sig)}};
  auto put = [&](const ReducedWord& site, int label) {
    auto [it, fresh] = out.labels.emplace(site.str(), label);
    if (!fresh && it->second != label)
      throw Error(ErrorCode::seam_conflict, "site " + site.human() + " receives points " + std::to_string(it->second) +
                                                " and " + std::to_string(label));
  };
  const std::size_t S = stages.size();
  for (std::size_t s = 0; s < S; ++s) {
    const auto& st = stages[s];
    const auto& wit = st.witness;
    const auto ball = shared_ball(sig, st.radius + 1);
    std::vector<ReducedWord> xs;
    if (sig.is_group()) {
      if (wit.y_sites.size() != 2) throw Error(ErrorCode::seam_conflict, "star witness lacks two y sites");
      const auto& ui = wit.y_sites[0];
      const auto& uj = wit.y_sites[1];
      if (is_prefix(ui, uj) || is_prefix(uj, ui))
        throw Error(ErrorCode::seam_conflict, "u_i = " + ui.human() + " and u_j = " + uj.human() + " are prefix-related");
      if (ui.is_identity() || uj.is_identity() || ui.last() == uj.last())
        throw Error(ErrorCode::seam_conflict, "u_i and u_j must end in distinct letters");
      const auto anchor = s == 0 ? ReducedWord::identity(sig) : concat(out.w, invert(ui));
      for (std::size_t k = 0; k < ball->size(); ++k) {
        const auto& u = (*ball)[k];
        bool below = (is_prefix(ui, u) && u.length() > ui.length()) || (is_prefix(uj, u) && u.length() > uj.length());
        if (below) continue;
        put(concat(anchor, u), st.cov[wit.labels[k]]);
      }
      for (const auto& site : wit.sites) xs.push_back(concat(anchor, site));
      out.w = s == 0 ? uj : concat(out.w, concat(invert(ui), uj));
    } else {
      if (wit.y_sites.size() != 1 || !wit.y) throw Error(ErrorCode::seam_conflict, "circ witness lacks its y site");
      const auto& uy = wit.y_sites[0];
      if (wit.labels[0] != *wit.y || wit.labels[*ball->index_of(uy.str())] != *wit.y)
        throw Error(ErrorCode::seam_conflict, "circ witness does not carry y at e and u_y");
      for (const auto& site : wit.sites)
        if (is_prefix(uy, site)) throw Error(ErrorCode::seam_conflict, "u_y = " + uy.human() + " is a prefix of " + site.human());
      const auto anchor = out.w;
      for (std::size_t k = 0; k < ball->size(); ++k) {
        const auto& u = (*ball)[k];
        if (s + 1 < S && is_prefix(uy, u)) continue;  // handed to the next stage
        put(concat(anchor, u), st.cov[wit.labels[k]]);
      }
      for (const auto& site : wit.sites) xs.push_back(concat(anchor, site));
      out.w = concat(out.w, uy);
    }
    out.x_sites.push_back(std::move(xs));
    out.anchors_w.push_back(out.w);
  }
  for (const auto& [site, label] : out.labels)
    if (!site.empty() && !out.labels.count(site.substr(0, site.size() - 1)))
      throw Error(ErrorCode::seam_conflict, "stitched sites are not prefix-closed at '" + site + "'");
  return out;
}

Construction build_ibt(const std::vector<Configuration>& Y, const std::vector<int>& exps, int target, int min_inner,
                       const WitnessHook& hook) {
  const auto sig = Y.front().signature();
  std::vector<IbtStage> stages;
  for (std::size_t s = 0; s < exps.size(); ++s) stages.push_back(ibt_stage(Y, exps[s], hook, static_cast<int>(s)));
  const std::size_t sF = exps.size();  // 1-based index of the first final-resolution stage

  Construction c;
  for (const auto& st : stages)
    c.log.push_back("stage 2^-" + std::to_string(st.exponent) + ": cover {" + join(st.cov) + "}, radius " +
                    std::to_string(st.radius) + ", root " + std::to_string(st.cov[st.witness.root]));

  std::optional<Stitched> done;
  std::size_t qualifying = 0;
  while (!done) {
    auto st = stitch(sig, stages);
    const int base = static_cast<int>(st.anchors_w[sF - 1].length());
    c.inner = std::max(sig.is_group() ? base + target : base, min_inner);
    // The latest stage must place every cover point beyond w|_{n*}.
    const std::size_t s = stages.size();
    bool ok = !sig.is_group() || s > sF;
    int N = c.inner;
    if (ok)
      for (const auto& x : st.x_sites[s - 1]) {
        if (static_cast<int>(x.length()) <= c.inner || static_cast<int>(lcp(x.str(), st.w.str())) < c.inner) ok = false;
        N = std::max(N, static_cast<int>(x.length()));
      }
    if (ok) {
      c.outer = N;
      qualifying = s;
      done = std::move(st);
      break;
    }
    if (static_cast<int>(stages.size()) >= kMaxStages)
      throw Error(ErrorCode::resource_limit, "IBT construction exceeded " + std::to_string(kMaxStages) + " stages");
    stages.push_back(stages.back());
  }
  // Keep extending w until it is at least N* long.
  while (static_cast<int>(done->w.length()) < c.outer) {
    if (static_cast<int>(stages.size()) >= kMaxStages)
      throw Error(ErrorCode::resource_limit, "IBT construction exceeded " + std::to_string(kMaxStages) + " stages");
    stages.push_back(stages.back());
    done = stitch(sig, stages);
  }
  for (const auto& st : stages) {
    RealizationStage rs{st.exponent, st.cov, {}, st.radius};
    for (const auto& y : st.witness.y_sites) rs.words.push_back(y.str());
    c.stages.push_back(std::move(rs));
  }
  c.labels = std::move(done->labels);
  c.w = done->w;
  c.log.push_back(std::to_string(stages.size()) + " stage(s), range from stage " + std::to_string(qualifying) + ": (" +
                  std::to_string(c.inner) + ", " + std::to_string(c.outer) + "]");
  return c;
}

std::vector<int> stage_exponents(int from, int to) {
  std::vector<int> e;
  for (int m = from; m <= std::max(from, to); ++m) e.push_back(m);
  return e;
}

void check_inputs(const std::vector<Configuration>& Y, int k) {
  if (Y.empty()) throw Error(ErrorCode::empty_set, "realization needs a nonempty Y");
  if (k < 1) throw Error(ErrorCode::depth_too_small, "realization resolution must be >= 1");
  for (const auto& y : Y)
    if (!(y.signature() == Y.front().signature())) throw Error(ErrorCode::signature_mismatch, "Y mixes signatures");
}

void check_in_system(const std::vector<Configuration>& Y, const ShiftSystem& sys) {
  if (!(Y.front().signature() == sys.signature()))
    throw Error(ErrorCode::signature_mismatch, "Y and the system have different signatures");
  for (std::size_t i = 0; i < Y.size(); ++i)
    if (!member_to_depth(Y[i], sys, sys.step() + 1))
      throw Error(ErrorCode::construction_error, "point " + std::to_string(i) + " of Y is not in the system");
}

// Shift invariance of Y at a depth: every σ_i(y) agrees with some point of Y.
void check_invariant(const std::vector<Configuration>& Y, int depth) {
  std::set<std::vector<Symbol>> blocks;
  for (const auto& y : Y) blocks.insert(central_block(y, depth).entries());
  for (std::size_t a = 0; a < Y.size(); ++a)
    for (char i : Y.front().signature().letters())
      if (!blocks.count(central_block(shift(Y[a], i), depth).entries()))
        throw Error(ErrorCode::construction_error, "Y is not shift-invariant: shifting point " + std::to_string(a) +
                                                       " by " + i + " leaves Y at depth " + std::to_string(depth));
}

// Largest depth whose admissibility scan stays small.
int feasible_depth(Signature sig, int step, int want) {
  int d = 1;
  while (d < want) {
    auto sz = ball_size(sig, d + step);
    if (!sz || *sz > 20000) break;
    ++d;
  }
  return d;
}

RealizationOutput finish(std::string mode, LimitKind kind, int k, const std::vector<Configuration>& Y,
                         Construction c, Configuration point, const std::optional<ShiftSystem>& sys) {
  const auto sig = Y.front().signature();
  PseudoOrbit::SiteMap sites;
  std::vector<int> labels;
  for (const auto& [s, l] : c.labels) {
    sites.emplace(s, Y[l]);
    labels.push_back(l);
  }
  PseudoOrbit orbit(sig, std::move(sites));
  const int m = sys ? sys->step() : 1;
  auto report = validate_pseudo_orbit(orbit, Dyadic{m + 1}, std::max(m + 2, k + 2));
  auto approx = limit_approx(kind, point, c.w, c.inner, c.outer, k);
  auto fine = limit_approx(kind, point, c.w, c.inner, c.outer, k + 1);
  std::vector<Block> ys;
  for (const auto& y : Y) ys.push_back(central_block(y, k));
  auto h = hausdorff(ys, approx.blocks());
  int declared = feasible_depth(sig, m, static_cast<int>(c.w->length()) + k);
  bool admissible = sys ? member_to_depth(point, *sys, declared) : false;
  c.log.push_back("hausdorff(Y, approximation) = " + h.to_string() + " at depth " + std::to_string(k));
  return RealizationOutput{std::move(mode),
                           kind,
                           k,
                           *c.w,
                           std::move(point),
                           std::move(orbit),
                           std::move(labels),
                           c.inner,
                           c.outer,
                           std::move(approx),
                           std::move(fine),
                           h,
                           h.at_most_value(Dyadic{k}),
                           declared,
                           admissible,
                           report,
                           std::move(c.stages),
                           std::move(c.log)};
}

Configuration splice_of(const std::vector<Configuration>& Y, const Construction& c) {
  std::map<std::string, Configuration, WordOrder> sites;
  for (const auto& [s, l] : c.labels) sites.emplace(s, Y[l]);
  return Configuration::splice(Y.front().signature(), std::move(sites));
}

}  // namespace

// Every stage targets depth k+1 so the fine approximation is also exact and
// invariance can be checked at depth k.
RealizationOutput realize_cict_as_omega_w(const std::vector<Configuration>& Y, const ShiftSystem& sys, int k) {
  check_inputs(Y, k);
  check_in_system(Y, sys);
  const int M = sys.step();
  auto c = build_cict(Y, stage_exponents(M + 1, k + 2), k + 1, 0);
  auto x = splice_of(Y, c);
  return finish("cict", LimitKind::omega_w, k, Y, std::move(c), std::move(x), sys);
}

RealizationOutput realize_ibt_as_omega_Fw(const std::vector<Configuration>& Y, const ShiftSystem& sys, int k,
                                          const WitnessHook& hook) {
  check_inputs(Y, k);
  check_in_system(Y, sys);
  const int M = sys.step();
  check_invariant(Y, k + 3);
  auto c = build_ibt(Y, stage_exponents(M + 1, k + 2), k + 1, 0, hook);
  auto x = splice_of(Y, c);
  const char* mode = Y.front().signature().is_group() ? "ibt-star" : "ibt-circ";
  return finish(mode, LimitKind::omega_Fw, k, Y, std::move(c), std::move(x), sys);
}

ShadowingOracle sft_oracle(const ShiftSystem& sys) {
  ShadowingOracle o;
  o.name = "sft";
  o.step = sys.step();
  o.modulus = [sys](Dyadic eps) { return shadowing_modulus(sys, eps); };
  o.shadow = [sys](const PseudoOrbit& orbit, int depth) { return ShadowResult{shadow_sft(orbit, sys, depth), 0}; };
  o.system = sys;
  return o;
}

ShadowingOracle sft_asymptotic_oracle(const ShiftSystem& sys) {
  ShadowingOracle o;
  o.name = "sft-asymptotic";
  o.step = sys.step();
  o.asymptotic = true;
  o.modulus = [sys](Dyadic eps) { return shadowing_modulus(sys, eps); };
  o.shadow = [sys](const PseudoOrbit& orbit, int depth) {
    // The admissibility scan is left to the realization, which picks a feasible depth.
    auto a = shadow_sft_asymptotic(orbit, sys, depth + 2, sys.step());
    for (const auto& g : a.guarantees)
      if (g.k == depth) return ShadowResult{a.point, g.from_shell};
    throw Error(ErrorCode::depth_too_small, "asymptotic shadowing gave no guarantee at depth " + std::to_string(depth));
  };
  o.system = sys;
  return o;
}

RealizationOutput realize_with_shadowing(const std::vector<Configuration>& Y, const ShadowingOracle& oracle, int k,
                                         RealizeMode mode) {
  check_inputs(Y, k);
  if (!oracle.shadow || !oracle.modulus) throw Error(ErrorCode::oracle_unavailable, "no shadowing oracle supplied");
  if (oracle.system) check_in_system(Y, *oracle.system);
  const int target = std::max(k + 1, oracle.step + 1);
  // Uniform shadowing needs every step below the modulus; the asymptotic
  // oracle only needs the coarse stage bound and shrinking defects.
  const int delta = oracle.modulus(Dyadic{target}).exponent;
  const auto exps = oracle.asymptotic ? stage_exponents(oracle.step + 1, std::max(delta, target + 1))
                                      : std::vector<int>{std::max(delta, target + 1)};
  if (mode == RealizeMode::ibt) check_invariant(Y, k + 3);
  auto build = [&](int min_inner) {
    return mode == RealizeMode::cict ? build_cict(Y, exps, target, min_inner) : build_ibt(Y, exps, target, min_inner, {});
  };
  auto c = build(0);
  ShadowResult shadow{splice_of(Y, c), 0};
  for (int round = 0; round < 3; ++round) {
    PseudoOrbit::SiteMap sites;
    for (const auto& [s, l] : c.labels) sites.emplace(s, Y[l]);
    shadow = oracle.shadow(PseudoOrbit(Y.front().signature(), std::move(sites)), target);
    if (shadow.from_shell <= c.inner + 1) break;
    c = build(shadow.from_shell - 1);
  }
  c.log.push_back("oracle " + oracle.name + " at depth " + std::to_string(target) + ", guarantee from shell " +
                  std::to_string(shadow.from_shell));
  std::string name = mode == RealizeMode::cict ? "cict" : (Y.front().signature().is_group() ? "ibt-star" : "ibt-circ");
  return finish(name + "+shadow", mode == RealizeMode::cict ? LimitKind::omega_w : LimitKind::omega_Fw, k, Y,
                std::move(c), std::move(shadow.point), oracle.system);
}

}  // namespace treeshift
