#include "treeshift/json_io.hpp"

namespace treeshift {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::parse_error, what); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad(std::string("missing field '") + key + "'");
  return j.at(key);
}

template <class T>
T get(const Json& j, const char* key) {
  try {
    return field(j, key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    bad(std::string("field '") + key + "': " + e.what());
  }
}

// Descends through a CLI output document to the value it carries.
const Json& unwrap(const Json& j, std::initializer_list<const char*> keys, const char* self) {
  const Json* cur = &j;
  if (cur->is_object() && cur->contains("payload") && cur->contains("status")) cur = &cur->at("payload");
  for (const char* k : keys)
    if (cur->is_object() && cur->contains(k) && cur->at(k).is_object()) return unwrap(cur->at(k), keys, self);
  (void)self;
  return *cur;
}

std::string letter_string(char c) { return std::string(1, c); }

Json letters_json(const std::vector<char>& v) {
  Json a = Json::array();
  for (char c : v) a.push_back(letter_string(c));
  return a;
}

Json words_json(const std::vector<ReducedWord>& v) {
  Json a = Json::array();
  for (const auto& w : v) a.push_back(w.str());
  return a;
}

ReducedWord word_from(Signature sig, const Json& j) {
  if (!j.is_string()) bad("word must be a string");
  return ReducedWord::from_reduced(sig, j.get<std::string>());
}

Json chains_json(const std::vector<std::vector<std::optional<ChainWitness>>>& chains) {
  Json a = Json::array();
  for (std::size_t x = 0; x < chains.size(); ++x)
    for (std::size_t y = 0; y < chains[x].size(); ++y)
      if (chains[x][y]) {
        Json c = to_json(*chains[x][y]);
        c["from"] = x;
        c["to"] = y;
        a.push_back(std::move(c));
      }
  return a;
}

}  // namespace

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    bad(std::string("invalid JSON: ") + e.what());
  }
}

Json to_json(const Signature& sig) { return sig.to_string(); }
Json to_json(const Alphabet& a) { return a.symbols(); }
Json to_json(const Dyadic& d) { return d.to_string(); }

Json to_json(const DyadicDistance& d) {
  return Json{{"bound", d.is_exact() ? "exact" : "at_most"}, {"value", Dyadic{d.exponent}.to_string()}};
}

Json to_json(const Block& b) {
  return Json{{"signature", to_json(b.signature())}, {"depth", b.depth()}, {"entries", b.entries()}};
}

Json to_json(const Configuration& x) {
  Json j;
  switch (x.kind()) {
    case Configuration::Kind::constant:
      j = {{"kind", "constant"}, {"signature", to_json(x.signature())}, {"symbol", x.constant_symbol()}};
      break;
    case Configuration::Kind::automaton: {
      const auto& a = x.automaton_def();
      j = {{"kind", "automaton"},
           {"signature", to_json(x.signature())},
           {"start", a.start()},
           {"transitions", a.transitions()},
           {"output", a.output()}};
      break;
    }
    case Configuration::Kind::override_: {
      Json e = Json::object();
      for (const auto& [w, s] : x.override_map()) e[w] = s;
      j = {{"kind", "override"}, {"depth", x.override_depth()}, {"entries", e}, {"base", to_json(x.base())}};
      break;
    }
    case Configuration::Kind::shift:
      j = {{"kind", "shift"}, {"by", x.shift_word().str()}, {"base", to_json(x.base())}};
      break;
    case Configuration::Kind::splice: {
      Json s = Json::object();
      for (const auto& [w, c] : x.splice_sites()) s[w] = to_json(c);
      j = {{"kind", "splice"}, {"signature", to_json(x.signature())}, {"sites", s}};
      break;
    }
  }
  return j;
}

Json to_json(const ShiftSystem& sys) {
  Json f = Json::array();
  for (const auto& b : sys.forbidden()) f.push_back(Json{{"depth", b.depth()}, {"entries", b.entries()}});
  return Json{{"signature", to_json(sys.signature())},
              {"alphabet", to_json(sys.alphabet())},
              {"step", sys.step()},
              {"forbidden", f}};
}

Json to_json(const PseudoOrbit& orbit) {
  Json s = Json::object();
  for (const auto& [w, c] : orbit.sites()) s[w] = to_json(c);
  return Json{{"signature", to_json(orbit.signature())},
              {"tail", orbit.tail() == Tail::shift_extend ? "shift-extend" : "none"},
              {"sites", s}};
}

Json to_json(const Step& s) {
  return Json{{"from", s.from.str()}, {"letter", letter_string(s.letter)}, {"defect", to_json(s.defect)}};
}

Json to_json(const DefectReport& r) {
  return Json{{"passed", r.passed},
              {"max_defect", to_json(r.max_defect)},
              {"worst", r.worst ? to_json(*r.worst) : Json()},
              {"sites_checked", r.sites_checked},
              {"delta", to_json(r.delta)},
              {"depth", r.depth}};
}

Json to_json(const std::vector<ShellDefect>& profile) {
  Json a = Json::array();
  for (const auto& s : profile)
    a.push_back(Json{{"shell", s.shell},
                     {"max_defect", to_json(s.max_defect)},
                     {"worst", s.worst ? to_json(*s.worst) : Json()}});
  return a;
}

Json to_json(const AsymptoticShadow& a) {
  Json g = Json::array();
  for (const auto& s : a.guarantees) g.push_back(Json{{"k", s.k}, {"from_shell", s.from_shell}});
  return Json{{"point", to_json(a.point)},
              {"weak_delta_ok", a.weak_delta_ok},
              {"admissible", a.admissible},
              {"violation", a.violation ? Json(a.violation->str()) : Json()},
              {"profile", to_json(a.profile)},
              {"guarantees", g}};
}

Json to_json(const NoShadowCertificate& c) {
  Json pts = Json::array(), mm = Json::array();
  for (const auto& b : c.points) pts.push_back(to_json(b));
  for (const auto& row : c.mismatches) {
    Json r = Json::array();
    for (const auto& m : row)
      r.push_back(Json{{"shell", m.shell}, {"site", m.site.str()}, {"distance", to_json(m.distance)}});
    mm.push_back(std::move(r));
  }
  return Json{{"holds", c.holds}, {"points", pts}, {"mismatches", mm}};
}

Json to_json(const EdgeGraph& g) {
  Json e = Json::array();
  for (const auto& x : g.edges()) e.push_back(Json{{"from", x.from}, {"letter", letter_string(x.letter)}, {"to", x.to}});
  return Json{{"signature", to_json(g.signature())},
              {"epsilon", to_json(g.epsilon())},
              {"depth", g.depth()},
              {"vertices", g.size()},
              {"edges", e}};
}

Json to_json(const ChainWitness& c) { return Json{{"word", c.word.str()}, {"points", c.points}}; }

Json to_json(const CictResult& r) {
  Json j{{"holds", r.holds}};
  if (r.assignment) j["assignment"] = Json{{"i", letters_json(r.assignment->i)}, {"t", letters_json(r.assignment->t)}};
  if (r.refutation)
    j["refutation"] = Json{{"point", r.refutation->point ? Json(*r.refutation->point) : Json()},
                           {"in_letters", letters_json(r.refutation->in_letters)},
                           {"out_letters", letters_json(r.refutation->out_letters)},
                           {"reason", r.refutation->reason}};
  j["chains"] = chains_json(r.chains);
  return j;
}

Json to_json(const Core& c) {
  Json e = Json::array();
  for (const auto& x : c.edges) e.push_back(Json{{"from", x.from}, {"letter", letter_string(x.letter)}, {"to", x.to}});
  return Json{{"vertices", c.vertices}, {"edges", e}};
}

Json to_json(const IbtResult& r) {
  Json j{{"witnessed", r.witnessed}};
  if (r.witness) {
    const auto& w = *r.witness;
    Json wj{{"root", w.root}, {"sites", words_json(w.sites)}};
    wj["y"] = w.y ? Json(*w.y) : Json();
    wj["y_sites"] = words_json(w.y_sites);
    wj["labels"] = w.labels;
    if (w.report) wj["report"] = to_json(*w.report);
    j["witness"] = std::move(wj);
  }
  if (r.refutation)
    j["refutation"] = Json{{"outside_core", r.refutation->outside_core}, {"reason", r.refutation->reason}};
  return j;
}

Json to_json(const LimitSetApproximation& a) {
  Json m = Json::array();
  for (const auto& x : a.members) m.push_back(Json{{"word", x.word.str()}, {"entries", x.block.entries()}});
  return Json{{"kind", limit_kind_name(a.kind)},
              {"inner", a.inner},
              {"outer", a.outer},
              {"depth", a.depth},
              {"candidates", a.candidates},
              {"members", m}};
}

Json to_json(const StabilizationScan& s) {
  Json rows = Json::array();
  for (const auto& r : s.rows)
    rows.push_back(Json{{"inner", r.inner}, {"members", r.members}, {"step", r.step ? to_json(*r.step) : Json()}});
  return Json{{"kind", limit_kind_name(s.kind)},
              {"depth", s.depth},
              {"outer", s.outer},
              {"rows", rows},
              {"stabilized", s.stabilized_at.has_value()},
              {"stabilized_at", s.stabilized_at ? Json(*s.stabilized_at) : Json()}};
}

Json to_json(const InvarianceReport& r) {
  Json f = Json::array();
  for (const auto& x : r.failures)
    f.push_back(Json{{"member", x.member},
                     {"word", x.word.str()},
                     {"letter", x.letter ? Json(letter_string(*x.letter)) : Json()},
                     {"reason", x.reason}});
  return Json{{"kind", limit_kind_name(r.kind)}, {"depth", r.depth}, {"passed", r.passed}, {"checks", r.checks},
              {"failures", f}};
}

Json to_json(const RealizationOutput& r) {
  Json stages = Json::array();
  for (const auto& s : r.stages)
    stages.push_back(Json{{"exponent", s.exponent}, {"cover", s.cover}, {"words", s.words}, {"radius", s.radius}});
  return Json{{"mode", r.mode},
              {"kind", limit_kind_name(r.kind)},
              {"resolution", Dyadic{r.resolution}.to_string()},
              {"word_prefix", r.word_prefix.str()},
              {"inner", r.inner},
              {"outer", r.outer},
              {"hausdorff", to_json(r.hausdorff)},
              {"within_bound", r.within_bound},
              {"declared_depth", r.declared_depth},
              {"admissible", r.admissible},
              {"orbit_report", to_json(r.orbit_report)},
              {"approximation", to_json(r.approximation)},
              {"stages", stages},
              {"labels", r.labels},
              {"point", to_json(r.point)}};
}

Json to_json(const PointSet& p) {
  Json pts = Json::array();
  for (const auto& x : p.points) pts.push_back(to_json(x));
  return Json{{"signature", to_json(p.sig)}, {"alphabet", to_json(p.alphabet)}, {"names", p.names}, {"points", pts}};
}

Signature signature_from_json(const Json& j) {
  if (!j.is_string()) bad("signature must be a string like \"group:2\"");
  return Signature::parse(j.get<std::string>());
}

Dyadic dyadic_from_json(const Json& j) {
  if (!j.is_string()) bad("dyadic value must be a string like \"2^-3\"");
  return Dyadic::parse(j.get<std::string>());
}

Block block_from_json(const Json& in) {
  const auto& j = unwrap(in, {"block"}, "entries");
  auto sig = signature_from_json(field(j, "signature"));
  return Block(sig, get<int>(j, "depth"), get<std::vector<Symbol>>(j, "entries"));
}

Configuration configuration_from_json(const Json& in) {
  const auto& j = unwrap(in, {"point", "config"}, "kind");
  const auto kind = get<std::string>(j, "kind");
  if (kind == "constant") return Configuration::constant(signature_from_json(field(j, "signature")), get<Symbol>(j, "symbol"));
  if (kind == "automaton")
    return Configuration::automaton(WordAutomaton(signature_from_json(field(j, "signature")), get<int>(j, "start"),
                                                  get<std::vector<std::vector<int>>>(j, "transitions"),
                                                  get<std::vector<Symbol>>(j, "output")));
  if (kind == "override") {
    auto base = configuration_from_json(field(j, "base"));
    std::map<std::string, Symbol, WordOrder> entries;
    for (const auto& [w, s] : field(j, "entries").items()) {
      word_from(base.signature(), Json(w));
      entries.emplace(w, s.get<Symbol>());
    }
    return Configuration::override_entries(base, get<int>(j, "depth"), std::move(entries));
  }
  if (kind == "shift") {
    auto base = configuration_from_json(field(j, "base"));
    return Configuration::shifted(base, word_from(base.signature(), field(j, "by")));
  }
  if (kind == "splice") {
    auto sig = signature_from_json(field(j, "signature"));
    std::map<std::string, Configuration, WordOrder> sites;
    for (const auto& [w, c] : field(j, "sites").items()) {
      word_from(sig, Json(w));
      sites.emplace(w, configuration_from_json(c));
    }
    return Configuration::splice(sig, std::move(sites));
  }
  bad("unknown configuration kind '" + kind + "'");
}

ShiftSystem system_from_json(const Json& in) {
  const auto& j = unwrap(in, {"system"}, "forbidden");
  auto sig = signature_from_json(field(j, "signature"));
  Alphabet alphabet(get<std::vector<std::string>>(j, "alphabet"));
  std::vector<Block> forbidden;
  for (const auto& b : field(j, "forbidden")) forbidden.emplace_back(sig, get<int>(b, "depth"), get<std::vector<Symbol>>(b, "entries"));
  return ShiftSystem(sig, alphabet, std::move(forbidden));
}

PseudoOrbit orbit_from_json(const Json& in) {
  const auto& j = unwrap(in, {"orbit"}, "sites");
  auto sig = signature_from_json(field(j, "signature"));
  Tail tail = Tail::shift_extend;
  if (j.contains("tail")) {
    auto t = get<std::string>(j, "tail");
    if (t == "none")
      tail = Tail::none;
    else if (t != "shift-extend")
      bad("unknown tail '" + t + "'");
  }
  PseudoOrbit::SiteMap sites;
  for (const auto& [w, c] : field(j, "sites").items()) {
    word_from(sig, Json(w));
    sites.emplace(w, configuration_from_json(c));
  }
  return PseudoOrbit(sig, std::move(sites), tail);
}

PointSet points_from_json(const Json& in) {
  const auto& j = unwrap(in, {"fixture"}, "points");
  PointSet p{signature_from_json(field(j, "signature")), Alphabet::numeric(2), {}, {}};
  if (j.contains("alphabet")) p.alphabet = Alphabet(get<std::vector<std::string>>(j, "alphabet"));
  for (const auto& c : field(j, "points")) p.points.push_back(configuration_from_json(c));
  if (j.contains("names")) p.names = get<std::vector<std::string>>(j, "names");
  if (p.names.size() != p.points.size()) {
    p.names.clear();
    for (std::size_t i = 0; i < p.points.size(); ++i) p.names.push_back("x" + std::to_string(i));
  }
  for (const auto& x : p.points)
    if (!(x.signature() == p.sig)) throw Error(ErrorCode::signature_mismatch, "point signature differs from the set");
  return p;
}

}  // namespace treeshift
